#include "imop/generators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace imop {

Point LineSegmentSpec::at(double t) const {
  const Eigen::Vector2d x = p + t * length * q / q.norm();
  return x;
}

const std::array<LineSegmentSpec, 3>& three_lines_segments() {
  static const std::array<LineSegmentSpec, 3> segments{{
      {{0.15, -0.20}, {0.47, 0.04}},
      {{0.47, -0.32}, {0.40, 0.14}},
      {{0.37, 0.18}, {0.38, 0.28}},
  }};
  return segments;
}

DataSet gen_ellipse(double a, double b, int count) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("gen_ellipse: semi-axes must be positive");
  if (count < 1) throw std::invalid_argument("gen_ellipse: need at least one point");
  constexpr double pi = std::numbers::pi;
  std::vector<DataPoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) {
    const double phase = static_cast<double>(j) / count;
    const double h = 0.5 * (std::cos(4.0 * pi * phase) + 1.0);
    points.push_back({Eigen::Vector2d(a * std::cos(2.0 * pi * phase), b * std::sin(2.0 * pi * phase)),
                      Eigen::Vector2d(h, 1.0 - h)});
  }
  return DataSet(2, 2, std::move(points));
}

DataSet gen_circle(int count) { return gen_ellipse(1.0, 1.0, count); }

DataSet gen_three_lines(int per_segment) {
  if (per_segment < 2) throw std::invalid_argument("gen_three_lines: need at least 2 points per segment");
  std::vector<DataPoint> points;
  points.reserve(static_cast<std::size_t>(3 * per_segment));
  for (const LineSegmentSpec& seg : three_lines_segments()) {
    for (int m = 0; m < per_segment; ++m) {
      const double t = static_cast<double>(m) / (per_segment - 1);
      points.push_back({seg.at(t), Eigen::Vector2d(t, 1.0 - t)});
    }
  }
  return DataSet(2, 2, std::move(points));
}

DescentResult weighted_sum_solve(const Objective& f, const Eigen::VectorXd& weights, const Point& x0,
                                 const DescentOptions& options) {
  if (weights.size() != f.num_objectives()) {
    throw std::invalid_argument("weighted_sum_solve: weight vector has the wrong length");
  }
  if (!in_simplex(weights)) throw std::invalid_argument("weighted_sum_solve: weights must lie in the simplex");
  if (x0.size() != f.num_variables()) throw std::invalid_argument("weighted_sum_solve: start point dimension");

  DescentResult res;
  res.x = x0;
  double phi = weights.dot(f.values(res.x));
  for (res.iterations = 0;; ++res.iterations) {
    const Eigen::VectorXd grad = f.jacobian(res.x).transpose() * weights;
    res.gradient_norm = grad.norm();
    if (!std::isfinite(res.gradient_norm) || !std::isfinite(phi)) {
      res.reason = "non-finite value or gradient";
      return res;
    }
    if (res.gradient_norm <= options.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= options.max_iterations) {
      res.reason = "iteration limit reached";
      return res;
    }
    const double slope = grad.squaredNorm();
    double step = options.initial_step;
    Point trial;
    double trial_phi = 0.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
      trial = res.x - step * grad;
      trial_phi = weights.dot(f.values(trial));
      if (trial_phi <= phi - options.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.reason = "line search failed";
      return res;
    }
    res.x = std::move(trial);
    phi = trial_phi;
    if (options.box && !options.box->contains(res.x)) {
      res.reason = "left the box";
      return res;
    }
  }
}

std::vector<Eigen::VectorXd> weight_grid(int count) {
  if (count < 2) throw std::invalid_argument("weight grid needs at least 2 weights");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out.emplace_back(Eigen::Vector2d(t, 1.0 - t));
  }
  return out;
}

std::vector<Point> saa_samples(const SaaConfig& config, int index) {
  if (config.sample_count < 1) throw std::invalid_argument("SAA needs at least one sample");
  const auto seed = static_cast<std::uint32_t>(config.seed);
  const auto seed_hi = static_cast<std::uint32_t>(config.seed >> 32);
  std::seed_seq seq{seed, seed_hi, static_cast<std::uint32_t>(config.shared_samples ? 0 : index + 1)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> xi(0.0, 2.0);
  std::vector<Point> samples;
  samples.reserve(static_cast<std::size_t>(config.sample_count));
  for (int j = 0; j < config.sample_count; ++j) samples.emplace_back(Eigen::Vector2d(xi(rng), 0.0));
  return samples;
}

GenerationReport gen_saa_location(const SaaConfig& config) {
  if (config.sample_count < 1) throw std::invalid_argument("SAA needs at least one sample");
  if (config.scalarization_count < 2) throw std::invalid_argument("SAA needs at least 2 scalarizations");
  const Point anchor = Eigen::Vector2d(-1.0, -1.0);
  const Point start = Eigen::Vector2d::Zero();
  const LocationExpectationObjective exact;
  std::optional<SampleAverageLocationObjective> shared;
  if (config.shared_samples && !config.analytic) shared.emplace(anchor, saa_samples(config, 0));

  const auto weights = weight_grid(config.scalarization_count);
  std::vector<DataPoint> points;
  std::vector<int> failed;
  for (int i = 0; i < config.scalarization_count; ++i) {
    DescentResult res;
    if (config.analytic) {
      res = weighted_sum_solve(exact, weights[i], start, config.descent);
    } else if (shared) {
      res = weighted_sum_solve(*shared, weights[i], start, config.descent);
    } else {
      const SampleAverageLocationObjective f(anchor, saa_samples(config, i));
      res = weighted_sum_solve(f, weights[i], start, config.descent);
    }
    if (!res.converged) {
      failed.push_back(i);
      continue;
    }
    const Eigen::Vector2d alpha(-res.x[1], 1.0 + res.x[1]);
    points.push_back({res.x, clip_into_simplex(alpha)});
  }
  if (points.empty()) throw std::runtime_error("gen_saa_location: no scalarization converged");
  return {DataSet(2, 2, std::move(points)), config.scalarization_count, std::move(failed)};
}

std::vector<Point> grid_starts(const Box& box, int per_axis) {
  if (per_axis < 1) throw std::invalid_argument("grid_starts: need at least one start per axis");
  const int n = box.dim();
  std::vector<Point> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Point x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = box.lower[i] + (idx[i] + 0.5) / per_axis * (box.upper[i] - box.lower[i]);
    }
    out.push_back(std::move(x));
    int i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) break;
  }
  return out;
}

GenerationReport gen_scalarized_dataset(const Objective& f, int weight_count, const std::vector<Point>& starts,
                                        const ScalarizeOptions& options) {
  if (f.num_objectives() != 2) throw std::invalid_argument("gen_scalarized_dataset: weight grid needs k = 2");
  if (starts.empty()) throw std::invalid_argument("gen_scalarized_dataset: no start points");
  const auto weights = weight_grid(weight_count);
  std::vector<DataPoint> points;
  std::vector<int> failed;
  for (int i = 0; i < weight_count; ++i) {
    std::vector<Point> found;
    double best_value = std::numeric_limits<double>::infinity();
    Point best;
    for (const Point& x0 : starts) {
      const DescentResult res = weighted_sum_solve(f, weights[i], x0, options.descent);
      if (!res.converged) continue;
      const double value = weights[i].dot(f.values(res.x));
      if (value < best_value) {
        best_value = value;
        best = res.x;
      }
      bool distinct = true;
      for (const Point& y : found) distinct = distinct && (res.x - y).norm() >= options.distinct_tolerance;
      if (distinct) found.push_back(res.x);
    }
    if (found.empty()) {
      failed.push_back(i);
      continue;
    }
    if (options.keep_all_minima) {
      for (Point& x : found) points.push_back({std::move(x), weights[i]});
    } else {
      points.push_back({std::move(best), weights[i]});
    }
  }
  if (points.empty()) throw std::runtime_error("gen_scalarized_dataset: no weighted-sum solve converged");
  return {DataSet(f.num_variables(), 2, std::move(points)), weight_count, std::move(failed)};
}

}  // namespace imop
