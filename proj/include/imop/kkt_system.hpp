#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/basis.hpp"
#include "imop/simplex.hpp"

namespace imop {

/// A decision vector together with its KKT vector.
struct DataPoint {
  Point x;
  Eigen::VectorXd alpha;
};

/**
 * Immutable, non-empty list of (x, alpha) pairs sharing dimensions n and k.
 *
 * KKT vectors are checked against the simplex slack on construction and
 * projected onto the simplex (negatives clamped, sum rescaled).
 */
class DataSet {
 public:
  DataSet(int num_variables, int num_objectives, std::vector<DataPoint> points,
          const SimplexTolerance& tol = {});

  int num_variables() const { return n_; }
  int num_objectives() const { return k_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<DataPoint>& points() const { return points_; }
  const DataPoint& operator[](std::size_t j) const { return points_[j]; }

  /// Decision vectors only, in data order.
  std::vector<Point> decision_points() const;

 private:
  int n_;
  int k_;
  std::vector<DataPoint> points_;
};

/// Stacked homogeneous system whose null vectors make every data point KKT.
struct KktSystem {
  Eigen::MatrixXd matrix;  // (n*N) x (k*d)
  int num_variables = 0;
  int num_points = 0;
  int num_objectives = 0;
  int basis_size = 0;
};

/**
 * L(x, alpha) = (alpha_1 grad b_1, ..., alpha_1 grad b_d, ..., alpha_k grad b_d).
 *
 * For a coefficient vector c laid out objective-major, L(x, alpha) c equals
 * Df(x)^T alpha for f = F(c).
 */
Eigen::MatrixXd assemble_block(const DataPoint& point, const MonomialBasis& basis);

KktSystem assemble_system(const DataSet& data, const MonomialBasis& basis);

/**
 * Reads the data CSV: one row per point, columns x_1..x_n, alpha_1..alpha_k.
 * Lines starting with '#' are skipped. Malformed rows and simplex violations
 * throw with the 1-based line number.
 */
DataSet load_dataset(const std::filesystem::path& path, int num_variables, int num_objectives,
                     const SimplexTolerance& tol = {});

/// Writes shortest round-trip decimal representations; load(save(D)) == D.
void save_dataset(const DataSet& data, const std::filesystem::path& path,
                  const std::string& header = {});

}  // namespace imop
