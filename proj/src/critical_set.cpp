#include "imop/critical_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "imop/csv.hpp"

namespace imop {

Box::Box(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw std::invalid_argument("box bounds must be nonempty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw std::invalid_argument("box axis " + std::to_string(i + 1) + " is empty or not finite");
    }
  }
}

bool Box::contains(const Point& x, double slack) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  }
  return true;
}

Box Box::parse(const std::string& text) {
  std::vector<double> lo, hi;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    const auto colon = axis.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("box axis '" + axis + "' is not lo:hi");
    lo.push_back(csv::parse_double(axis.substr(0, colon)));
    hi.push_back(csv::parse_double(axis.substr(colon + 1)));
  }
  if (lo.empty()) throw std::invalid_argument("empty box specification");
  return Box(Eigen::Map<Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
             Eigen::Map<Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size())));
}

std::string Box::to_string() const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out += ',';
    out += csv::format_double(lower[i]) + ':' + csv::format_double(upper[i]);
  }
  return out;
}

std::vector<Point> CriticalPointCloud::decision_points() const {
  std::vector<Point> xs;
  xs.reserve(points.size());
  for (const CriticalPoint& p : points) xs.push_back(p.x);
  return xs;
}

double CriticalPointCloud::max_spacing() const {
  if (resolution.empty() || box.dim() != static_cast<int>(resolution.size())) return 0.0;
  double h = 0.0;
  for (int i = 0; i < box.dim(); ++i) {
    h = std::max(h, (box.upper[i] - box.lower[i]) / (resolution[i] - 1));
  }
  return h;
}

CriticalPointCloud grid_scan(const Objective& f, const Box& box, const std::vector<int>& resolution,
                             double tol, std::int64_t node_budget) {
  const int n = f.num_variables();
  if (box.dim() != n) {
    throw std::invalid_argument("grid_scan: box has dimension " + std::to_string(box.dim()) +
                                ", objective has " + std::to_string(n) + " variables");
  }
  if (static_cast<int>(resolution.size()) != n) {
    throw std::invalid_argument("grid_scan: need one resolution per axis");
  }
  if (!(tol >= 0.0)) throw std::invalid_argument("grid_scan: tolerance must be >= 0");
  double nodes = 1.0;
  for (int r : resolution) {
    if (r < 2) throw std::invalid_argument("grid_scan: resolution must be >= 2 per axis");
    nodes *= r;
  }
  if (nodes > static_cast<double>(node_budget)) {
    std::ostringstream os;
    os << "grid_scan: " << nodes << " nodes exceed the budget of " << node_budget;
    throw GridBudgetError(os.str());
  }

  CriticalPointCloud cloud;
  cloud.box = box;
  cloud.resolution = resolution;
  cloud.tolerance = tol;

  const auto total = static_cast<std::int64_t>(nodes);
  std::vector<int> idx(n, 0);
  Point x(n);
  for (std::int64_t node = 0; node < total; ++node) {
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(idx[i]) / (resolution[i] - 1);
      x[i] = idx[i] == resolution[i] - 1 ? box.upper[i] : box.lower[i] + t * (box.upper[i] - box.lower[i]);
    }
    const Eigen::MatrixXd jac = f.jacobian(x);
    AlphaFit fit = best_simplex_combination(jac.transpose());
    if (fit.residual <= tol) cloud.points.push_back({x, std::move(fit.alpha), fit.residual});
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < resolution[i]) break;
      idx[i] = 0;
    }
  }
  return cloud;
}

CriticalPointCloud grid_scan(const Objective& f, const Box& box, int resolution, double tol,
                             std::int64_t node_budget) {
  return grid_scan(f, box, std::vector<int>(static_cast<std::size_t>(box.dim()), resolution), tol,
                   node_budget);
}

std::vector<std::vector<int>> ComponentLabeling::members() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_components));
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(static_cast<int>(i));
  return out;
}

namespace {

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::int64_t v : key) h = (h ^ std::hash<std::int64_t>{}(v)) * 1099511628211ULL;
    return h;
  }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ComponentLabeling cluster_components(const std::vector<Point>& points, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cluster_components: radius must be > 0");
  ComponentLabeling out;
  out.radius = radius;
  if (points.empty()) return out;

  const Eigen::Index n = points.front().size();
  using Key = std::vector<std::int64_t>;
  std::unordered_map<Key, std::vector<std::size_t>, CellHash> cells;
  std::vector<Key> keys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) throw std::invalid_argument("cluster_components: mixed dimensions");
    Key key(static_cast<std::size_t>(n));
    for (Eigen::Index a = 0; a < n; ++a) key[a] = static_cast<std::int64_t>(std::floor(points[i][a] / radius));
    cells[key].push_back(i);
    keys[i] = std::move(key);
  }

  const double r2 = radius * radius;
  UnionFind uf(points.size());
  std::vector<int> offset(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::fill(offset.begin(), offset.end(), -1);
    while (true) {
      Key neighbour = keys[i];
      for (Eigen::Index a = 0; a < n; ++a) neighbour[a] += offset[a];
      if (auto it = cells.find(neighbour); it != cells.end()) {
        for (std::size_t j : it->second) {
          if (j > i && (points[i] - points[j]).squaredNorm() <= r2) uf.unite(i, j);
        }
      }
      Eigen::Index a = 0;
      while (a < n && offset[a] == 1) offset[a++] = -1;
      if (a == n) break;
      ++offset[a];
    }
  }

  std::unordered_map<std::size_t, int> root_label;
  out.labels.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [it, inserted] = root_label.try_emplace(uf.find(i), out.num_components);
    if (inserted) ++out.num_components;
    out.labels[i] = it->second;
  }
  return out;
}

ComponentLabeling cluster_components(const CriticalPointCloud& cloud, double radius) {
  return cluster_components(cloud.decision_points(), radius);
}

double default_link_radius(const CriticalPointCloud& cloud) {
  const double h = cloud.max_spacing();
  if (h <= 0.0) throw std::invalid_argument("cloud has no grid; give the link radius explicitly");
  return 2.0 * h;
}

CriticalPointCloud with_labels(CriticalPointCloud cloud, const ComponentLabeling& labeling) {
  if (labeling.labels.size() != cloud.size()) {
    throw std::invalid_argument("labeling does not match the cloud size");
  }
  cloud.labels = labeling.labels;
  return cloud;
}

CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const std::vector<Point>& data,
                                    double radius, const ComponentLabeling& labeling) {
  if (!(radius > 0.0)) throw std::invalid_argument("filter_near_data: radius must be > 0");
  if (labeling.labels.size() != cloud.size()) {
    throw std::invalid_argument("filter_near_data: labeling does not match the cloud size");
  }
  std::vector<bool> keep(static_cast<std::size_t>(labeling.num_components), false);
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (keep[labeling.labels[i]]) continue;
    for (const Point& d : data) {
      if (d.size() == cloud.points[i].x.size() && (cloud.points[i].x - d).squaredNorm() <= r2) {
        keep[labeling.labels[i]] = true;
        break;
      }
    }
  }
  CriticalPointCloud out;
  out.box = cloud.box;
  out.resolution = cloud.resolution;
  out.tolerance = cloud.tolerance;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!keep[labeling.labels[i]]) continue;
    out.points.push_back(cloud.points[i]);
    out.labels.push_back(labeling.labels[i]);
  }
  return out;
}

CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const std::vector<Point>& data,
                                    double radius) {
  if (cloud.labels.size() == cloud.size() && !cloud.empty()) {
    ComponentLabeling labeling;
    labeling.labels = cloud.labels;
    labeling.num_components = *std::max_element(cloud.labels.begin(), cloud.labels.end()) + 1;
    if (*std::min_element(cloud.labels.begin(), cloud.labels.end()) >= 0) {
      return filter_near_data(cloud, data, radius, labeling);
    }
  }
  if (cloud.empty()) return filter_near_data(cloud, data, radius, ComponentLabeling{});
  return filter_near_data(cloud, data, radius, cluster_components(cloud, default_link_radius(cloud)));
}

CriticalPointCloud filter_near_data(const CriticalPointCloud& cloud, const DataSet& data, double radius) {
  return filter_near_data(cloud, data.decision_points(), radius);
}

double directed_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: point sets must be nonempty");
  double cmax = 0.0;
  for (const Point& p : a) {
    double cmin = std::numeric_limits<double>::infinity();
    for (const Point& q : b) {
      const double d = (p - q).squaredNorm();
      if (d < cmin) {
        cmin = d;
        // p cannot raise the running maximum any more.
        if (cmin <= cmax) break;
      }
    }
    cmax = std::max(cmax, cmin);
  }
  return std::sqrt(cmax);
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: point sets must be nonempty");
  for (const auto* set : {&a, &b}) {
    for (const Point& p : *set) {
      if (p.size() != a.front().size()) throw std::invalid_argument("hausdorff: mixed dimensions");
    }
  }
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

void save_cloud(const CriticalPointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (cloud.empty()) return;
  const std::size_t n = static_cast<std::size_t>(cloud.points.front().x.size());
  const std::size_t k = static_cast<std::size_t>(cloud.points.front().alpha.size());
  out << '#';
  for (std::size_t i = 0; i < n; ++i) out << (i ? ",x" : " x") << i + 1;
  for (std::size_t i = 0; i < k; ++i) out << ",alpha" << i + 1;
  out << ",residual,label\n";
  const bool labeled = cloud.labels.size() == cloud.size();
  std::vector<double> row(n + k + 2);
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const CriticalPoint& p = cloud.points[j];
    for (std::size_t i = 0; i < n; ++i) row[i] = p.x[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < k; ++i) row[n + i] = p.alpha[static_cast<Eigen::Index>(i)];
    row[n + k] = p.residual;
    row[n + k + 1] = labeled ? cloud.labels[j] : -1;
    csv::write_row(out, row);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CriticalPointCloud load_cloud(const std::filesystem::path& path, int num_variables, int num_objectives) {
  const auto rows = csv::read_numeric(path, static_cast<std::size_t>(num_variables + num_objectives + 2));
  CriticalPointCloud cloud;
  bool labeled = !rows.empty();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(num_variables, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (const csv::Row& row : rows) {
    CriticalPoint p;
    p.x = Eigen::Map<const Eigen::VectorXd>(row.values.data(), num_variables);
    p.alpha = Eigen::Map<const Eigen::VectorXd>(row.values.data() + num_variables, num_objectives);
    p.residual = row.values[num_variables + num_objectives];
    const double label = row.values[num_variables + num_objectives + 1];
    if (label != std::floor(label)) throw csv::ParseError(row.line, "component label is not an integer");
    if (label < 0) labeled = false;
    cloud.labels.push_back(static_cast<int>(label));
    lo = lo.cwiseMin(p.x);
    hi = hi.cwiseMax(p.x);
    cloud.tolerance = std::max(cloud.tolerance, p.residual);
    cloud.points.push_back(std::move(p));
  }
  if (!labeled) cloud.labels.clear();
  if (!cloud.empty()) {
    cloud.box.lower = lo;
    cloud.box.upper = hi;
  }
  return cloud;
}

}  // namespace imop
