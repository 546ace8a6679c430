#include "imop/alpha_estimation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "imop/csv.hpp"

namespace imop {

int default_neighborhood_size(int num_objectives) { return 2 * (num_objectives - 1) + 1; }

namespace {

std::vector<std::size_t> nearest(const std::vector<Eigen::VectorXd>& pts, std::size_t centre, int count) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  order.erase(order.begin() + static_cast<std::ptrdiff_t>(centre));
  const auto by_distance = [&](std::size_t a, std::size_t b) {
    const double da = (pts[a] - pts[centre]).squaredNorm();
    const double db = (pts[b] - pts[centre]).squaredNorm();
    return da < db || (da == db && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + count, order.end(), by_distance);
  order.resize(static_cast<std::size_t>(count));
  order.insert(order.begin(), centre);
  return order;
}

std::optional<Eigen::VectorXd> fit_normal(const Eigen::MatrixXd& nbhd, std::string& diagnostic) {
  const Eigen::Index k = nbhd.cols();
  const Eigen::RowVectorXd mean = nbhd.colwise().mean();
  const Eigen::MatrixXd centred = nbhd.rowwise() - mean;
  const double scale = std::max(centred.cwiseAbs().maxCoeff(), 1e-300);

  if (k == 2) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred / scale, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s[0] <= 1e-12 || (s.size() > 1 && s[1] >= s[0] * (1.0 - 1e-12))) {
      diagnostic = "degenerate neighbourhood: no dominant direction";
      return std::nullopt;
    }
    return Eigen::VectorXd(svd.matrixV().col(1));
  }

  Eigen::MatrixXd design(nbhd.rows(), k);
  design.col(0).setOnes();
  design.rightCols(k - 1) = centred.leftCols(k - 1) / scale;
  const Eigen::VectorXd response = centred.col(k - 1) / scale;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    diagnostic = "degenerate neighbourhood: regression is rank deficient";
    return std::nullopt;
  }
  const Eigen::VectorXd beta = qr.solve(response);
  Eigen::VectorXd normal(k);
  normal.head(k - 1) = -beta.tail(k - 1);
  normal[k - 1] = 1.0;
  return Eigen::VectorXd(normal.normalized());
}

}  // namespace

std::vector<KktEstimate> estimate_kkt_vectors(const FrontCloud& front, int neighborhood_size) {
  const int k = front.num_objectives();
  if (k < 2) throw std::invalid_argument("estimate_kkt_vectors: need k >= 2 objectives");
  if (neighborhood_size == 0) neighborhood_size = default_neighborhood_size(k);
  if (neighborhood_size < k - 1) {
    throw std::invalid_argument("estimate_kkt_vectors: neighbourhood size must be at least k - 1");
  }
  if (front.size() < static_cast<std::size_t>(neighborhood_size) + 1) {
    throw std::invalid_argument("estimate_kkt_vectors: front has " + std::to_string(front.size()) +
                                " points, need at least " + std::to_string(neighborhood_size + 1));
  }
  for (const auto& y : front.image_points) {
    if (y.size() != k) throw std::invalid_argument("estimate_kkt_vectors: mixed image dimensions");
  }

  std::vector<KktEstimate> out(front.size());
  for (std::size_t j = 0; j < front.size(); ++j) {
    const auto idx = nearest(front.image_points, j, neighborhood_size);
    Eigen::MatrixXd nbhd(static_cast<Eigen::Index>(idx.size()), k);
    for (std::size_t r = 0; r < idx.size(); ++r) nbhd.row(static_cast<Eigen::Index>(r)) = front.image_points[idx[r]].transpose();

    KktEstimate& est = out[j];
    std::optional<Eigen::VectorXd> normal = fit_normal(nbhd, est.diagnostic);
    if (!normal) continue;
    if (normal->sum() < 0.0) *normal = -*normal;
    if (normal->minCoeff() < -kOrientationTolerance) {
      est.diagnostic = "normal has mixed signs; not a KKT vector";
      continue;
    }
    Eigen::VectorXd alpha = normal->cwiseMax(0.0);
    const double sum = alpha.sum();
    if (!(sum > 0.0)) {
      est.diagnostic = "normal has no positive component";
      continue;
    }
    est.alpha = alpha / sum;
  }
  return out;
}

DataSet estimates_to_dataset(const FrontCloud& front, const std::vector<KktEstimate>& estimates) {
  if (front.decision_points.size() != front.size()) {
    throw std::invalid_argument("front has no decision points to pair with the estimates");
  }
  if (estimates.size() != front.size()) throw std::invalid_argument("estimate count does not match the front");
  std::vector<DataPoint> points;
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    if (estimates[j].alpha) points.push_back({front.decision_points[j], *estimates[j].alpha});
  }
  if (points.empty()) throw std::runtime_error("every front point was flagged");
  return DataSet(static_cast<int>(front.decision_points.front().size()), front.num_objectives(), std::move(points));
}

FrontCloud load_front(const std::filesystem::path& path, int num_objectives, int num_variables) {
  if (num_objectives < 2 || num_variables < 0) throw std::invalid_argument("load_front: bad dimensions");
  const auto rows = csv::read_numeric(path, static_cast<std::size_t>(num_objectives + num_variables));
  FrontCloud front;
  for (const csv::Row& row : rows) {
    front.image_points.emplace_back(Eigen::Map<const Eigen::VectorXd>(row.values.data(), num_objectives));
    if (num_variables > 0) {
      front.decision_points.emplace_back(
          Eigen::Map<const Eigen::VectorXd>(row.values.data() + num_objectives, num_variables));
    }
  }
  return front;
}

}  // namespace imop
