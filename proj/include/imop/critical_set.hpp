#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/basis.hpp"
#include "imop/kkt_system.hpp"
#include "imop/objective.hpp"

namespace imop {

/// Axis-aligned box [lower_i, upper_i].
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Box() = default;
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Point& x, double slack = 0.0) const;

  /// Parses "lo1:hi1,lo2:hi2,...".
  static Box parse(const std::string& text);
  std::string to_string() const;
};

struct CriticalPoint {
  Point x;
  Eigen::VectorXd alpha;
  double residual = 0.0;
};

/**
 * Grid nodes whose best KKT residual is at most `tolerance`.
 *
 * `labels` is empty until the cloud has been clustered; otherwise it holds
 * one component id per point.
 */
struct CriticalPointCloud {
  std::vector<CriticalPoint> points;
  Box box;
  std::vector<int> resolution;
  double tolerance = 0.0;
  std::vector<int> labels;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::vector<Point> decision_points() const;
  /// Largest distance between neighbouring grid nodes along one axis; 0 without a grid.
  double max_spacing() const;
};

class GridBudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kDefaultNodeBudget = 10'000'000;

/**
 * Evaluates best_alpha at every node of a regular grid with `resolution[i]`
 * nodes along axis i (end points included) and keeps those with residual <= tol.
 * Nodes are visited with the first axis varying fastest.
 */
CriticalPointCloud grid_scan(const Objective& f, const Box& box, const std::vector<int>& resolution,
                             double tol, std::int64_t node_budget = kDefaultNodeBudget);
CriticalPointCloud grid_scan(const Objective& f, const Box& box, int resolution, double tol,
                             std::int64_t node_budget = kDefaultNodeBudget);

struct ComponentLabeling {
  std::vector<int> labels;  // numbered 0, 1, ... in order of first appearance
  double radius = 0.0;
  int num_components = 0;

  std::vector<std::vector<int>> members() const;
};

/// Single-linkage components: points at Euclidean distance <= radius share a label.
ComponentLabeling cluster_components(const std::vector<Point>& points, double radius);
ComponentLabeling cluster_components(const CriticalPointCloud& cloud, double radius);

/// 2 x the cloud's largest grid spacing.
double default_link_radius(const CriticalPointCloud& cloud);

/// Copy of the cloud carrying the given labels.
CriticalPointCloud with_labels(CriticalPointCloud cloud, const ComponentLabeling& labeling);

/**
 * Keeps whole components that have at least one point within `radius` of a
 * data point. Components come from `labeling` if given, otherwise from the
 * cloud's own labels, otherwise from clustering at the default link radius.
 */
CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const std::vector<Point>& data,
                                    double radius);
CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const std::vector<Point>& data,
                                    double radius, const ComponentLabeling& labeling);
CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const DataSet& data, double radius);

/// sup over a in A of dist(a, B).
double directed_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

/// max of both directed distances. Throws on empty input.
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

/// Columns x_1..x_n, alpha_1..alpha_k, residual, label (-1 when unlabeled).
void save_cloud(const CriticalPointCloud& cloud, const std::filesystem::path& path);

/// Reads the save_cloud schema. Box and tolerance are taken from the data.
CriticalPointCloud load_cloud(const std::filesystem::path& path, int num_variables, int num_objectives);

}  // namespace imop
