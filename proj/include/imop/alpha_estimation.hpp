#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/basis.hpp"
#include "imop/kkt_system.hpp"

namespace imop {

/// Objective values of (approximately) Pareto optimal points, optionally paired with their decision vectors.
struct FrontCloud {
  std::vector<Eigen::VectorXd> image_points;
  std::vector<Point> decision_points;  // empty, or one per image point

  int num_objectives() const { return image_points.empty() ? 0 : static_cast<int>(image_points.front().size()); }
  std::size_t size() const { return image_points.size(); }
};

struct KktEstimate {
  std::optional<Eigen::VectorXd> alpha;  // empty when the point is flagged
  std::string diagnostic;
};

/// 2 (k - 1) + 1.
int default_neighborhood_size(int num_objectives);

inline constexpr double kOrientationTolerance = 1e-6;

/**
 * Fits a hyperplane through each front point and its `neighborhood_size`
 * nearest neighbours and turns the oriented normal into a simplex vector.
 * k = 2 uses total least squares, k >= 3 ordinary least squares with f_k as
 * response. Points with mixed-sign normals or rank-deficient neighbourhoods are
 * flagged. A neighborhood_size of 0 selects the default.
 */
std::vector<KktEstimate> estimate_kkt_vectors(const FrontCloud& front, int neighborhood_size = 0);

/// Pairs decision points with the unflagged estimates; throws when none remain.
DataSet estimates_to_dataset(const FrontCloud& front, const std::vector<KktEstimate>& estimates);

/// CSV with k image columns followed by n decision columns (n may be 0).
FrontCloud load_front(const std::filesystem::path& path, int num_objectives, int num_variables);

}  // namespace imop
