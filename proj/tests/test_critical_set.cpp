#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "imop/critical_set.hpp"
#include "imop/generators.hpp"
#include "imop/solver.hpp"
#include "oracles.hpp"

using imop::Box;
using imop::Point;

namespace {

Box square(double lo, double hi) { return Box(Eigen::Vector2d(lo, lo), Eigen::Vector2d(hi, hi)); }

// f1 = f2 = |x|^2 as a polynomial.
imop::PolynomialObjective twin_paraboloids() {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 5);
  c(0, 1) = c(0, 4) = c(1, 1) = c(1, 4) = 1;
  return imop::PolynomialObjective(imop::MonomialBasis(2, 2), c);
}

// The ellipse objective written in the monomial basis with unit-norm coefficients,
// the scaling produced by the inverse solver.
imop::PolynomialObjective unit_ellipse_model(double a, double b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(18);
  c << -3 * a * a, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, -3 * b * b, 0, 0, 0, 0, 1;
  return imop::reconstruct_objective(c.normalized(), imop::MonomialBasis(2, 3), 2);
}

std::vector<Point> random_cloud(std::mt19937_64& rng, int max_size) {
  std::vector<Point> out(1 + rng() % max_size);
  for (auto& p : out) p = oracle::random_point(2, -1, 1, rng);
  return out;
}

}  // namespace

TEST(Box, ParseAndContain) {
  const Box b = Box::parse("-1.5:1.5,-2:0.5");
  EXPECT_EQ(b.dim(), 2);
  EXPECT_DOUBLE_EQ(b.upper[1], 0.5);
  EXPECT_TRUE(b.contains(Eigen::Vector2d(0, 0)));
  EXPECT_FALSE(b.contains(Eigen::Vector2d(0, 1)));
  EXPECT_EQ(Box::parse(b.to_string()).lower, b.lower);
  EXPECT_THROW(Box::parse("1:0"), std::invalid_argument);
  EXPECT_THROW(Box::parse("1"), std::invalid_argument);
}

TEST(GridScan, CircleBandAndCoverage) {
  const auto f = unit_ellipse_model(1, 1);
  const auto cloud = imop::grid_scan(f, square(-1.5, 1.5), 301, 1e-2);
  ASSERT_FALSE(cloud.empty());
  for (const auto& p : cloud.points) {
    EXPECT_LE(std::abs(p.x.squaredNorm() - 1.0), 0.05);
    EXPECT_LE(p.residual, 1e-2);
    EXPECT_TRUE(imop::in_simplex(p.alpha));
  }
  EXPECT_LE(imop::directed_hausdorff(oracle::sample_ellipse(1, 1, 2000), cloud.decision_points()), 0.02);
}

TEST(GridScan, EllipseStaysNearCurve) {
  const auto f = unit_ellipse_model(2, 1);
  const auto cloud = imop::grid_scan(f, Box(Eigen::Vector2d(-2.5, -1.5), Eigen::Vector2d(2.5, 1.5)), 301, 1e-2);
  ASSERT_FALSE(cloud.empty());
  EXPECT_LE(imop::hausdorff(cloud.decision_points(), oracle::sample_ellipse(2, 1, 4000)), 0.05);
}

TEST(GridScan, UniqueMinimizerGivesNeighbourhoodOfOrigin) {
  const auto cloud = imop::grid_scan(twin_paraboloids(), square(-1, 1), 101, 0.05);
  ASSERT_FALSE(cloud.empty());
  for (const auto& p : cloud.points) EXPECT_LE(p.x.norm(), 0.05);
}

TEST(GridScan, BudgetAndArguments) {
  const imop::EllipseObjective f(1, 1);
  EXPECT_THROW(imop::grid_scan(f, square(-1, 1), 4000, 1e-2), imop::GridBudgetError);
  EXPECT_THROW(imop::grid_scan(f, square(-1, 1), 1, 1e-2), std::invalid_argument);
  EXPECT_THROW(imop::grid_scan(f, Box(Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones()), 5, 1e-2),
               std::invalid_argument);
}

TEST(GridScan, MonotoneInTolerance) {
  const imop::EllipseObjective f(1, 1);
  const auto small = imop::grid_scan(f, square(-1.5, 1.5), 151, 1e-3);
  const auto large = imop::grid_scan(f, square(-1.5, 1.5), 151, 1e-2);
  std::set<std::pair<double, double>> big;
  for (const auto& p : large.points) big.insert({p.x[0], p.x[1]});
  for (const auto& p : small.points) EXPECT_TRUE(big.count({p.x[0], p.x[1]}));
  EXPECT_GE(large.size(), small.size());
}

TEST(GridScan, RefinementDoesNotMoveAway) {
  const imop::EllipseObjective f(1, 1);
  const auto ref = oracle::sample_ellipse(1, 1, 720);
  double previous = std::numeric_limits<double>::infinity();
  for (int res : {101, 201, 401}) {
    const auto cloud = imop::grid_scan(f, square(-1.5, 1.5), res, 2e-2);
    const double d = imop::directed_hausdorff(ref, cloud.decision_points());
    EXPECT_LE(d, previous + 1e-12) << res;
    previous = d;
  }
}

TEST(Cluster, TwoPoints) {
  const std::vector<Point> pts{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)};
  EXPECT_EQ(imop::cluster_components(pts, 0.5).num_components, 2);
  EXPECT_EQ(imop::cluster_components(pts, 2.0).num_components, 1);
  EXPECT_EQ(imop::cluster_components(pts, 1.0).num_components, 1);
  EXPECT_THROW(imop::cluster_components(pts, 0.0), std::invalid_argument);
}

TEST(Cluster, MatchesBruteForceLinkage) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto pts = random_cloud(rng, 200);
    const double r = 0.05 + 0.1 * (t % 4);
    const auto lab = imop::cluster_components(pts, r);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if ((pts[i] - pts[j]).norm() <= r) EXPECT_EQ(lab.labels[i], lab.labels[j]);
      }
    }
    // Every component is internally connected: flood fill from one member reaches all.
    for (const auto& members : lab.members()) {
      std::vector<int> stack{members.front()};
      std::set<int> seen{members.front()};
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j : members) {
          if (!seen.count(j) && (pts[i] - pts[j]).norm() <= r) {
            seen.insert(j);
            stack.push_back(j);
          }
        }
      }
      EXPECT_EQ(seen.size(), members.size());
    }
  }
}

TEST(Cluster, PermutationInvariantPartition) {
  std::mt19937_64 rng(4);
  const auto pts = random_cloud(rng, 300);
  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Point> shuffled;
  for (auto i : perm) shuffled.push_back(pts[i]);
  const auto a = imop::cluster_components(pts, 0.1);
  const auto b = imop::cluster_components(shuffled, 0.1);
  ASSERT_EQ(a.num_components, b.num_components);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) {
      EXPECT_EQ(a.labels[perm[i]] == a.labels[perm[j]], b.labels[i] == b.labels[j]);
    }
  }
}

TEST(FilterNearData, KeepsOnlyComponentsTouchingData) {
  const auto f = unit_ellipse_model(1, 1);
  auto cloud = imop::grid_scan(f, square(-1.5, 1.5), 101, 2e-2);
  // Add a far-away component by hand.
  for (int i = 0; i < 5; ++i) cloud.points.push_back({Eigen::Vector2d(1.4, 1.4 - 0.01 * i), Eigen::Vector2d(0.5, 0.5), 0});
  const auto lab = imop::cluster_components(cloud, default_link_radius(cloud));
  EXPECT_GE(lab.num_components, 2);
  const std::vector<Point> data{Eigen::Vector2d(1, 0)};
  const auto kept = imop::filter_near_data(cloud, data, 0.1, lab);
  EXPECT_EQ(kept.size(), cloud.size() - 5);
  for (const auto& p : kept.points) EXPECT_LT(p.x.norm(), 1.2);

  EXPECT_TRUE(imop::filter_near_data(cloud, std::vector<Point>{}, 0.1, lab).empty());
  const auto all = imop::filter_near_data(cloud, cloud.decision_points(), 0.1, lab);
  EXPECT_EQ(all.size(), cloud.size());
}

TEST(FilterNearData, UsesDefaultLinkRadiusWithoutLabels) {
  const auto f = unit_ellipse_model(1, 1);
  const auto cloud = imop::grid_scan(f, square(-1.5, 1.5), 101, 2e-2);
  const auto kept = imop::filter_near_data(cloud, std::vector<Point>{Eigen::Vector2d(0, 1)}, 0.1);
  EXPECT_EQ(kept.size(), cloud.size());
  EXPECT_EQ(kept.labels.size(), kept.size());
}

TEST(Hausdorff, Examples) {
  const std::vector<Point> a{Eigen::Vector2d(0, 0)}, b{Eigen::Vector2d(3, 4)};
  EXPECT_DOUBLE_EQ(imop::hausdorff(a, b), 5.0);
  EXPECT_DOUBLE_EQ(imop::hausdorff(a, a), 0.0);
  EXPECT_THROW(imop::hausdorff(a, {}), std::invalid_argument);
  EXPECT_THROW(imop::hausdorff({}, a), std::invalid_argument);
}

TEST(Hausdorff, MetricAxioms) {
  std::mt19937_64 rng(5);
  const auto brute = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    double h = 0;
    for (const auto& p : x) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& q : y) m = std::min(m, (p - q).norm());
      h = std::max(h, m);
    }
    return h;
  };
  for (int t = 0; t < 100; ++t) {
    const auto a = random_cloud(rng, 60), b = random_cloud(rng, 60), c = random_cloud(rng, 60);
    const double ab = imop::hausdorff(a, b);
    EXPECT_NEAR(ab, std::max(brute(a, b), brute(b, a)), 1e-15);
    EXPECT_EQ(ab, imop::hausdorff(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(imop::hausdorff(a, a), 0.0);
    auto shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.push_back(a.front());
    EXPECT_EQ(imop::hausdorff(a, shuffled), 0.0);
    EXPECT_LE(ab, imop::hausdorff(a, c) + imop::hausdorff(c, b) + 1e-12);
  }
}

TEST(CloudFile, RoundTrip) {
  const imop::EllipseObjective f(1, 1);
  auto cloud = imop::grid_scan(f, square(-1.5, 1.5), 61, 5e-2);
  cloud = imop::with_labels(cloud, imop::cluster_components(cloud, 0.2));
  const auto path = oracle::temp_dir("cloud") / "cloud.csv";
  imop::save_cloud(cloud, path);
  const auto back = imop::load_cloud(path, 2, 2);
  ASSERT_EQ(back.size(), cloud.size());
  EXPECT_EQ(back.labels, cloud.labels);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_EQ(back.points[i].x, cloud.points[i].x);
    EXPECT_EQ(back.points[i].alpha, cloud.points[i].alpha);
    EXPECT_EQ(back.points[i].residual, cloud.points[i].residual);
  }
}
