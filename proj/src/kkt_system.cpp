#include "imop/kkt_system.hpp"

#include <fstream>
#include <stdexcept>

#include "imop/csv.hpp"

namespace imop {

DataSet::DataSet(int num_variables, int num_objectives, std::vector<DataPoint> points,
                 const SimplexTolerance& tol)
    : n_(num_variables), k_(num_objectives), points_(std::move(points)) {
  if (n_ < 1 || k_ < 1) throw std::invalid_argument("data set needs n >= 1 and k >= 1");
  if (points_.empty()) throw std::invalid_argument("data set needs at least one point");
  for (std::size_t j = 0; j < points_.size(); ++j) {
    DataPoint& p = points_[j];
    if (p.x.size() != n_ || p.alpha.size() != k_) {
      throw std::invalid_argument("data point " + std::to_string(j + 1) + " has dimensions (" +
                                  std::to_string(p.x.size()) + ", " + std::to_string(p.alpha.size()) +
                                  "), expected (" + std::to_string(n_) + ", " + std::to_string(k_) + ")");
    }
    try {
      p.alpha = project_into_simplex(p.alpha, tol);
    } catch (const SimplexError& e) {
      throw SimplexError("data point " + std::to_string(j + 1) + ": " + e.what());
    }
  }
}

std::vector<Point> DataSet::decision_points() const {
  std::vector<Point> xs;
  xs.reserve(points_.size());
  for (const DataPoint& p : points_) xs.push_back(p.x);
  return xs;
}

Eigen::MatrixXd assemble_block(const DataPoint& point, const MonomialBasis& basis) {
  if (point.x.size() != basis.num_variables()) {
    throw std::invalid_argument("assemble_block: point has " + std::to_string(point.x.size()) +
                                " variables, basis has " + std::to_string(basis.num_variables()));
  }
  const int d = basis.size();
  const Eigen::Index k = point.alpha.size();
  const Eigen::MatrixXd grads = basis.gradients(point.x);
  Eigen::MatrixXd block(basis.num_variables(), k * d);
  for (Eigen::Index i = 0; i < k; ++i) block.middleCols(i * d, d) = point.alpha[i] * grads;
  return block;
}

KktSystem assemble_system(const DataSet& data, const MonomialBasis& basis) {
  if (data.num_variables() != basis.num_variables()) {
    throw std::invalid_argument("assemble_system: data has " + std::to_string(data.num_variables()) +
                                " variables, basis has " + std::to_string(basis.num_variables()));
  }
  KktSystem sys;
  sys.num_variables = data.num_variables();
  sys.num_points = static_cast<int>(data.size());
  sys.num_objectives = data.num_objectives();
  sys.basis_size = basis.size();

  const int n = sys.num_variables;
  sys.matrix.resize(static_cast<Eigen::Index>(n) * sys.num_points,
                    static_cast<Eigen::Index>(sys.num_objectives) * sys.basis_size);
  for (int j = 0; j < sys.num_points; ++j) {
    sys.matrix.middleRows(static_cast<Eigen::Index>(j) * n, n) = assemble_block(data[j], basis);
  }
  return sys;
}

DataSet load_dataset(const std::filesystem::path& path, int num_variables, int num_objectives,
                     const SimplexTolerance& tol) {
  const auto rows = csv::read_numeric(path, static_cast<std::size_t>(num_variables + num_objectives));
  std::vector<DataPoint> points;
  points.reserve(rows.size());
  for (const csv::Row& row : rows) {
    DataPoint p;
    p.x = Eigen::Map<const Eigen::VectorXd>(row.values.data(), num_variables);
    const Eigen::VectorXd raw =
        Eigen::Map<const Eigen::VectorXd>(row.values.data() + num_variables, num_objectives);
    try {
      p.alpha = project_into_simplex(raw, tol);
    } catch (const SimplexError& e) {
      throw csv::ParseError(row.line, std::string("KKT vector outside the simplex: ") + e.what());
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw std::runtime_error(path.string() + ": no data rows");
  return DataSet(num_variables, num_objectives, std::move(points), tol);
}

void save_dataset(const DataSet& data, const std::filesystem::path& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!header.empty()) out << "# " << header << '\n';
  std::vector<double> row(static_cast<std::size_t>(data.num_variables() + data.num_objectives()));
  for (const DataPoint& p : data.points()) {
    for (int i = 0; i < data.num_variables(); ++i) row[i] = p.x[i];
    for (int i = 0; i < data.num_objectives(); ++i) row[data.num_variables() + i] = p.alpha[i];
    csv::write_row(out, row);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace imop
