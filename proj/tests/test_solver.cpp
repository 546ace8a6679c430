#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "imop/generators.hpp"
#include "imop/solver.hpp"
#include "oracles.hpp"

using imop::DataPoint;
using imop::DataSet;
using imop::MonomialBasis;

namespace {

Eigen::VectorXd circle_coefficients() {
  return (Eigen::VectorXd(18) << -3, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, -3, 0, 0, 0, 0, 1).finished();
}

Eigen::VectorXd location_coefficients() {
  return (Eigen::VectorXd(10) << 2, 1, 2, 0, 1, -2, 1, 0, 0, 1).finished();
}

// Points t a + (1 - t)(1, 0) with alpha = (t, 1 - t).
DataSet location_segment(int count) {
  std::vector<DataPoint> pts;
  for (int j = 0; j < count; ++j) {
    const double t = static_cast<double>(j) / (count - 1);
    pts.push_back({Eigen::Vector2d(-t + (1 - t), -t), Eigen::Vector2d(t, 1 - t)});
  }
  return DataSet(2, 2, pts);
}

DataSet random_dataset(int n, int k, int count, std::mt19937_64& rng) {
  std::vector<DataPoint> pts;
  for (int j = 0; j < count; ++j) pts.push_back({oracle::random_point(n, -1.5, 1.5, rng), oracle::random_simplex(k, rng)});
  return DataSet(n, k, pts);
}

void expect_valid_spectrum(const imop::SvdSpectrum& s, const Eigen::MatrixXd& m) {
  ASSERT_EQ(s.size(), m.cols());
  for (int i = 1; i < s.size(); ++i) EXPECT_LE(s.singular_values[i - 1], s.singular_values[i]);
  EXPECT_LE((s.right_vectors.transpose() * s.right_vectors - Eigen::MatrixXd::Identity(s.size(), s.size()))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
  for (int i = 0; i < s.size(); ++i) {
    const double si = s.singular_values[i];
    const double lv = (m * s.vector(i)).norm();
    if (si > 1e-10 * s.largest()) {
      EXPECT_NEAR(lv, si, 1e-8 * si);
    } else {
      EXPECT_LE(lv, 1e-9 * std::max(1.0, s.largest()));
    }
  }
}

}  // namespace

TEST(SvdSpectrum, DiagonalMatrix) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 5;
  m(1, 1) = 3;
  const auto s = imop::svd_spectrum(m);
  EXPECT_DOUBLE_EQ(s.singular_values[0], 3.0);
  EXPECT_DOUBLE_EQ(s.singular_values[1], 5.0);
  EXPECT_NEAR(std::abs(s.vector(0)[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.vector(1)[0]), 1.0, 1e-15);
}

TEST(SvdSpectrum, CircleDataHasTwoDimensionalNullSpace) {
  const auto sys = imop::assemble_system(imop::gen_circle(1000), MonomialBasis(2, 3));
  const auto s = imop::svd_spectrum(sys);
  expect_valid_spectrum(s, sys.matrix);
  EXPECT_LE(s.singular_values[1], 1e-12 * sys.matrix.norm());
  EXPECT_NEAR(s.singular_values[2], 5.41, 0.1);
  EXPECT_EQ(imop::count_zero_singular_values(s), 2);
}

TEST(SvdSpectrum, UnderdeterminedSystemIsPadded) {
  const DataSet one(2, 2, {{Eigen::Vector2d(0.3, -0.7), Eigen::Vector2d(0.4, 0.6)}});
  const auto sys = imop::assemble_system(one, MonomialBasis(2, 3));
  ASSERT_EQ(sys.matrix.rows(), 2);
  ASSERT_EQ(sys.matrix.cols(), 18);
  const auto s = imop::svd_spectrum(sys);
  EXPECT_EQ(s.padded_zeros, 16);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(s.singular_values[i], 0.0);
  EXPECT_EQ(18 - oracle::rank_by_elimination(sys.matrix, 1e-12), 16);
  expect_valid_spectrum(s, sys.matrix);
}

TEST(SvdSpectrum, RejectsNonFiniteEntries) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3);
  m(1, 1) = std::nan("");
  EXPECT_THROW(imop::svd_spectrum(m), std::runtime_error);
}

TEST(SvdSpectrum, OptimalValueIdentity) {
  std::mt19937_64 rng(1);
  const auto sys = imop::assemble_system(random_dataset(2, 2, 20, rng), MonomialBasis(2, 3));
  const auto s = imop::svd_spectrum(sys);
  EXPECT_NEAR((sys.matrix * s.vector(0)).norm(), s.singular_values[0], 1e-10 * std::max(1.0, s.singular_values[0]));
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd u = oracle::random_point(sys.matrix.cols(), -1, 1, rng).normalized();
    EXPECT_GE((sys.matrix * u).norm(), s.singular_values[0] - 1e-10);
  }
}

TEST(SvdSpectrum, RankMatchesEliminationOracle) {
  std::mt19937_64 rng(2);
  std::vector<imop::KktSystem> systems;
  systems.push_back(imop::assemble_system(imop::gen_circle(40), MonomialBasis(2, 3)));
  systems.push_back(imop::assemble_system(imop::gen_ellipse(2, 1, 30), MonomialBasis(2, 3)));
  systems.push_back(imop::assemble_system(location_segment(25), MonomialBasis(2, 2)));
  systems.push_back(imop::assemble_system(location_segment(25), MonomialBasis(2, 4)));
  for (int t = 0; t < 6; ++t) {
    const int n = 1 + t % 3;
    const int count = 1 + static_cast<int>(rng() % 12);
    systems.push_back(imop::assemble_system(random_dataset(n, 2, count, rng), MonomialBasis(n, 2 + t % 2)));
  }
  for (const auto& sys : systems) {
    ASSERT_LE(sys.matrix.cols(), 40);
    const auto s = imop::svd_spectrum(sys);
    const int zeros = imop::select_indices(s, 1e-9 * s.largest());
    EXPECT_EQ(zeros, sys.matrix.cols() - oracle::rank_by_elimination(sys.matrix, 1e-9))
        << sys.matrix.rows() << "x" << sys.matrix.cols();
  }
}

TEST(SelectIndices, PrefixSemantics) {
  imop::SvdSpectrum s;
  s.singular_values = (Eigen::VectorXd(4) << 1e-15, 1e-14, 5.41, 6.0).finished();
  s.right_vectors = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_EQ(imop::select_indices(s, 1e-14), 2);
  EXPECT_EQ(imop::select_indices(s, 0.0), 0);
  EXPECT_EQ(imop::select_indices(s, 100.0), 4);
  EXPECT_THROW(imop::select_indices(s, -1.0), std::invalid_argument);

  imop::SvdSpectrum t;
  t.singular_values = (Eigen::VectorXd(6) << 0.0, 0.4654, 1.2076, 1.7744, 8.16, 9.0).finished();
  t.right_vectors = Eigen::MatrixXd::Identity(6, 6);
  EXPECT_EQ(imop::select_indices(t, 1.7744), 4);
  EXPECT_EQ(imop::gap_selection(t), 1);
  EXPECT_EQ(imop::gap_selection(t, 2), 4);
}

TEST(GapSelection, FindsLargestRatio) {
  imop::SvdSpectrum s;
  s.singular_values = (Eigen::VectorXd(5) << 1e-15, 1e-14, 5.0, 6.0, 60.0).finished();
  s.right_vectors = Eigen::MatrixXd::Identity(5, 5);
  EXPECT_EQ(imop::gap_selection(s), 2);
  EXPECT_EQ(imop::gap_selection(s, 3), 4);
}

TEST(ComposeCoefficient, SingleVectorAndPythagoras) {
  std::mt19937_64 rng(3);
  const auto s = imop::svd_spectrum(imop::assemble_system(random_dataset(2, 2, 15, rng), MonomialBasis(2, 2)));
  EXPECT_TRUE(imop::compose_coefficient(s, 1, Eigen::VectorXd::Ones(1)).isApprox(s.vector(0), 1e-15));
  const Eigen::VectorXd raw = imop::compose_coefficient(s, 2, Eigen::Vector2d(3, 4), false);
  EXPECT_NEAR(raw.norm(), 5.0, 1e-12);
  EXPECT_NEAR(imop::compose_coefficient(s, 2, Eigen::Vector2d(3, 4)).norm(), 1.0, 1e-15);
  EXPECT_THROW(imop::compose_coefficient(s, 2, Eigen::Vector2d::Zero()), std::invalid_argument);
  EXPECT_THROW(imop::compose_coefficient(s, 0, Eigen::VectorXd()), std::invalid_argument);
  EXPECT_THROW(imop::compose_coefficient(s, 2, Eigen::Vector3d(1, 1, 1)), std::invalid_argument);
}

TEST(SolveInverse, CircleRecoversKnownObjective) {
  const DataSet data = imop::gen_circle(1000);
  const MonomialBasis basis(2, 3);
  const auto probe = imop::solve_inverse(data, basis);
  ASSERT_EQ(probe.selected_count, 2);
  const Eigen::MatrixXd v = probe.spectrum.right_vectors.leftCols(2);
  EXPECT_LE(oracle::span_residual(v, circle_coefficients().normalized()), 1e-8);

  imop::SolveOptions opts;
  opts.threshold = probe.spectrum.singular_values[1];
  opts.weights = Eigen::VectorXd(v.transpose() * circle_coefficients());
  opts.normalize = false;
  const auto sol = imop::solve_inverse(data, basis, opts);
  EXPECT_LE((sol.coefficients - circle_coefficients()).cwiseAbs().maxCoeff(), 1e-10);
  std::mt19937_64 rng(4);
  const imop::EllipseObjective exact(1, 1);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd x = oracle::random_point(2, -2, 2, rng);
    EXPECT_LE((sol.objective.values(x) - exact.values(x)).norm(), 1e-9);
  }
  EXPECT_FALSE(sol.degeneracy.degenerate());
}

TEST(SolveInverse, SelfRecoveryOfLocationCoefficients) {
  const auto sol = imop::solve_inverse(location_segment(200), MonomialBasis(2, 2));
  EXPECT_LE(sol.spectrum.singular_values[0], 1e-10 * sol.spectrum.largest());
  const Eigen::MatrixXd v = sol.spectrum.right_vectors.leftCols(sol.selected_count);
  EXPECT_LE(oracle::span_residual(v, location_coefficients().normalized()), 1e-8);
}

TEST(SolveInverse, ThreeLinesGap) {
  const auto sys = imop::assemble_system(imop::gen_three_lines(500), MonomialBasis(2, 5));
  const auto s = imop::svd_spectrum(sys);
  EXPECT_GE(s.singular_values[4] / s.singular_values[3], 1e4);
  EXPECT_EQ(imop::gap_selection(s), 4);
}

TEST(SolveInverse, EmptySelectionIsAnError) {
  std::mt19937_64 rng(5);
  imop::SolveOptions opts;
  opts.threshold = 0.0;
  EXPECT_THROW(imop::solve_inverse(random_dataset(2, 2, 30, rng), MonomialBasis(2, 2), opts), imop::NoSolutionError);
}

TEST(SolveInverse, UnnormalizedRequiresExactNull) {
  std::mt19937_64 rng(6);
  imop::SolveOptions opts;
  opts.normalize = false;
  opts.threshold = 1e6;
  opts.weights = Eigen::VectorXd::Ones(10);
  EXPECT_THROW(imop::solve_inverse(random_dataset(2, 2, 30, rng), MonomialBasis(2, 2), opts), std::invalid_argument);
}

TEST(SolveInverse, SinglePointIsExactNull) {
  const DataSet one(2, 2, {{Eigen::Vector2d(0.2, 0.9), Eigen::Vector2d(0.3, 0.7)}});
  const auto sol = imop::solve_inverse(one, MonomialBasis(2, 3));
  EXPECT_EQ(sol.spectrum.singular_values[0], 0.0);
  EXPECT_LE(imop::kkt_residual(sol.objective, one[0].x, one[0].alpha), 1e-12);
  EXPECT_FALSE(sol.notes.empty());
}

TEST(SolveInverse, ResidualBoundOnRandomProblems) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 2);
    const int degree = 1 + static_cast<int>(rng() % 3);
    const DataSet data = random_dataset(n, k, 1 + static_cast<int>(rng() % 25), rng);
    const MonomialBasis basis(n, degree);
    imop::SolveOptions opts;
    const auto s = imop::svd_spectrum(imop::assemble_system(data, basis));
    opts.threshold = s.singular_values[static_cast<int>(rng() % s.size())];
    const auto sol = imop::solve_inverse(data, basis, opts);
    double worst = 0;
    for (const auto& p : data.points()) worst = std::max(worst, imop::kkt_residual(sol.objective, p.x, p.alpha));
    EXPECT_LE(worst, sol.residual_bound() + 1e-10);
    EXPECT_NEAR(sol.coefficients.norm(), 1.0, 1e-12);
  }
}

TEST(SolveInverse, ObjectivePermutationSwapsBlocks) {
  const DataSet data = imop::gen_circle(200);
  std::vector<DataPoint> swapped;
  for (const auto& p : data.points()) swapped.push_back({p.x, p.alpha.reverse()});
  const MonomialBasis basis(2, 3);
  const auto a = imop::solve_inverse(data, basis);
  const auto b = imop::solve_inverse(DataSet(2, 2, swapped), basis);
  EXPECT_LE((a.spectrum.singular_values - b.spectrum.singular_values).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXd va = a.spectrum.right_vectors.leftCols(a.selected_count);
  const Eigen::MatrixXd vb = b.spectrum.right_vectors.leftCols(b.selected_count);
  for (int i = 0; i < va.cols(); ++i) {
    Eigen::VectorXd permuted(18);
    permuted << va.col(i).tail(9), va.col(i).head(9);
    EXPECT_LE(oracle::span_residual(vb, permuted), 1e-8);
  }
}

TEST(SolveInverse, SkipDegenerateChoosesUsableVector) {
  const auto sol = [] {
    imop::SolveOptions opts;
    opts.skip_degenerate = true;
    return imop::solve_inverse(imop::gen_circle(300), MonomialBasis(2, 3), opts);
  }();
  ASSERT_GE(sol.chosen_vector, 0);
  EXPECT_LT(sol.chosen_vector, sol.selected_count);
  EXPECT_FALSE(sol.degeneracy.degenerate());
  for (int i = 0; i < sol.chosen_vector; ++i) {
    EXPECT_NE(std::find(sol.degenerate_vectors.begin(), sol.degenerate_vectors.end(), i), sol.degenerate_vectors.end());
  }
  EXPECT_LE(sol.spectrum.singular_values[sol.selected_count - 1], sol.threshold);
}

TEST(Degeneracy, FlagsMissingVariable) {
  // (x2^3, x2^3 - 3 x2) ignores x1.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(18);
  c[8] = 1;
  c[9 + 8] = 1;
  c[9 + 3] = -3;
  const auto report = imop::variable_dependence(imop::reconstruct_objective(c, MonomialBasis(2, 3), 2));
  ASSERT_EQ(report.flagged, std::vector<int>{0});
  EXPECT_GT(report.dependence[1], 0.1);
  EXPECT_FALSE(imop::variable_dependence(imop::reconstruct_objective(circle_coefficients(), MonomialBasis(2, 3), 2))
                   .degenerate());
}

TEST(DegreeSweep, ThreeLinesDropsAtDegreeFive) {
  const auto sweep = imop::degree_sweep(imop::gen_three_lines(500), {1, 2, 3, 4, 5, 6, 7});
  ASSERT_EQ(sweep.size(), 7u);
  EXPECT_LE(sweep.at(5), 1e-10);
  for (int d = 1; d <= 4; ++d) EXPECT_GE(sweep.at(d), 1e4 * sweep.at(5));
}

TEST(DegreeSweep, CircleAndSinglePoint) {
  EXPECT_LE(imop::degree_sweep(imop::gen_circle(1000), {3}).at(3), 1e-12);
  const DataSet one(2, 2, {{Eigen::Vector2d(0.2, 0.9), Eigen::Vector2d(0.3, 0.7)}});
  for (const auto& [d, s] : imop::degree_sweep(one, {1, 2, 3})) EXPECT_EQ(s, 0.0) << d;
  EXPECT_THROW(imop::degree_sweep(one, {}), std::invalid_argument);
  EXPECT_THROW(imop::degree_sweep(one, {0}), std::invalid_argument);
}

TEST(SampleBound, OverfittingGuard) {
  EXPECT_EQ(imop::max_admissible_degree(2, 17, 2), 4);
  EXPECT_TRUE(imop::satisfies_sample_bound(2, 17, 2, imop::MonomialBasis(2, 4).size()));
  EXPECT_FALSE(imop::satisfies_sample_bound(2, 17, 2, imop::MonomialBasis(2, 5).size()));
  std::mt19937_64 rng(8);
  const DataSet data = random_dataset(2, 2, 17, rng);
  imop::SolveOptions opts;
  opts.enforce_sample_bound = true;
  EXPECT_NO_THROW(imop::solve_inverse(data, MonomialBasis(2, 4), opts));
  try {
    imop::solve_inverse(data, MonomialBasis(2, 5), opts);
    FAIL() << "expected overfitting rejection";
  } catch (const imop::OverfittingError& e) {
    EXPECT_NE(std::string(e.what()).find("largest admissible degree 4"), std::string::npos) << e.what();
  }
}
