#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/critical_set.hpp"
#include "imop/kkt_system.hpp"
#include "imop/objective.hpp"

namespace imop {

/// Segment p + [0, 1] * length * q / |q|.
struct LineSegmentSpec {
  Eigen::Vector2d p;
  Eigen::Vector2d q;
  double length = 0.25;

  Point at(double t) const;
  Point end() const { return at(1.0); }
};

/// The three segments of the disconnected-lines data set.
const std::array<LineSegmentSpec, 3>& three_lines_segments();

/// x_j = (cos 2 pi j/N, sin 2 pi j/N), alpha_j = (h, 1 - h) with h = (cos 4 pi j/N + 1) / 2, j = 1..N.
DataSet gen_circle(int count);

/// As gen_circle with x_j scaled to (a cos, b sin).
DataSet gen_ellipse(double a, double b, int count);

/// `per_segment` equidistant points per segment, alpha linear from (0,1) to (1,0).
DataSet gen_three_lines(int per_segment);

struct DescentOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 10'000;
  double sufficient_decrease = 1e-4;
  double initial_step = 1.0;
  int max_halvings = 60;
  std::optional<Box> box;  // leaving it ends the run unconverged
};

struct DescentResult {
  Point x;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string reason;  // empty when converged
};

/// Gradient descent with backtracking on sum_i w_i f_i.
DescentResult weighted_sum_solve(const Objective& f, const Eigen::VectorXd& weights, const Point& x0,
                                 const DescentOptions& options = {});

/// (t, 1 - t) for t = i / (count - 1), i = 0..count-1.
std::vector<Eigen::VectorXd> weight_grid(int count);

/// A data set together with the scalarizations that were dropped.
struct GenerationReport {
  DataSet data;
  int attempted = 0;
  std::vector<int> failed;  // 0-based weight indices without a converged point
};

struct SaaConfig {
  int sample_count = 50;
  int scalarization_count = 1000;
  std::uint64_t seed = 0;
  /// Draw one sample set for the whole run instead of one per weight index.
  bool shared_samples = false;
  /// Use the exact expectation instead of a sample average.
  bool analytic = false;
  DescentOptions descent;
};

/// The random samples of the location problem used for weight index `index`.
std::vector<Point> saa_samples(const SaaConfig& config, int index);

/// Weighted-sum minimizers of the SAA location problem with alpha = (-x2, 1 + x2) clipped into the simplex.
GenerationReport gen_saa_location(const SaaConfig& config);

struct ScalarizeOptions {
  DescentOptions descent;
  /// Keep every distinct converged minimizer instead of only the best one per weight.
  bool keep_all_minima = false;
  double distinct_tolerance = 1e-4;
};

/// Regular grid of `per_axis` starts per axis inside the box (cell centres).
std::vector<Point> grid_starts(const Box& box, int per_axis);

/**
 * One weighted-sum solve per weight of weight_grid(weight_count) and start point.
 * For each weight the converged minimizer with the lowest weighted value is kept.
 * Throws std::runtime_error when no solve converges.
 */
GenerationReport gen_scalarized_dataset(const Objective& f, int weight_count, const std::vector<Point>& starts,
                                        const ScalarizeOptions& options = {});

}  // namespace imop
