#include "imop/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "imop/csv.hpp"

namespace imop {

// ---------------------------------------------------------------------------
// PolynomialObjective

PolynomialObjective::PolynomialObjective(MonomialBasis basis, Eigen::MatrixXd coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (coefficients_.cols() != basis_.size()) {
    throw std::invalid_argument("polynomial objective: " + std::to_string(coefficients_.cols()) +
                                " coefficients per objective, basis has " +
                                std::to_string(basis_.size()));
  }
  if (coefficients_.rows() < 1) throw std::invalid_argument("polynomial objective: k must be >= 1");
}

Eigen::VectorXd PolynomialObjective::values(const Point& x) const {
  return coefficients_ * basis_.values(x);
}

Eigen::MatrixXd PolynomialObjective::jacobian(const Point& x) const {
  return coefficients_ * basis_.gradients(x).transpose();
}

Eigen::VectorXd PolynomialObjective::coefficient_vector() const {
  const Eigen::MatrixXd row_major = coefficients_.transpose();
  return Eigen::Map<const Eigen::VectorXd>(row_major.data(), row_major.size());
}

PolynomialObjective PolynomialObjective::scaled(double factor) const {
  return PolynomialObjective(basis_, factor * coefficients_);
}

PolynomialObjective reconstruct_objective(const Eigen::VectorXd& c, const MonomialBasis& basis,
                                          int num_objectives) {
  const Eigen::Index d = basis.size();
  if (num_objectives < 1 || c.size() != num_objectives * d) {
    throw std::invalid_argument("reconstruct_objective: coefficient vector has length " +
                                std::to_string(c.size()) + ", expected k*d = " +
                                std::to_string(num_objectives * d));
  }
  Eigen::MatrixXd coeffs(num_objectives, d);
  for (int i = 0; i < num_objectives; ++i) coeffs.row(i) = c.segment(i * d, d).transpose();
  return PolynomialObjective(basis, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Analytic objectives

EllipseObjective::EllipseObjective(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse: semi-axes must be positive");
}

std::string EllipseObjective::name() const {
  if (a_ == 1.0 && b_ == 1.0) return "circle";
  return "ellipse(" + csv::format_double(a_) + "," + csv::format_double(b_) + ")";
}

Eigen::VectorXd EllipseObjective::values(const Point& x) const {
  const double cubic = x[0] * x[0] * x[0] + x[1] * x[1] * x[1];
  return Eigen::Vector2d(-3.0 * a_ * a_ * x[0] + cubic, -3.0 * b_ * b_ * x[1] + cubic);
}

Eigen::MatrixXd EllipseObjective::jacobian(const Point& x) const {
  const double d1 = 3.0 * x[0] * x[0];
  const double d2 = 3.0 * x[1] * x[1];
  Eigen::Matrix2d jac;
  jac << d1 - 3.0 * a_ * a_, d2,  //
      d1, d2 - 3.0 * b_ * b_;
  return jac;
}

Eigen::VectorXd LocationExpectationObjective::values(const Point& x) const {
  const Eigen::Vector2d a(-1.0, -1.0);
  const Eigen::Vector2d mean_xi(1.0, 0.0);
  return Eigen::Vector2d((x - a).squaredNorm(), (x - mean_xi).squaredNorm() + 1.0 / 3.0);
}

Eigen::MatrixXd LocationExpectationObjective::jacobian(const Point& x) const {
  Eigen::Matrix2d jac;
  jac.row(0) = 2.0 * (x - Eigen::Vector2d(-1.0, -1.0)).transpose();
  jac.row(1) = 2.0 * (x - Eigen::Vector2d(1.0, 0.0)).transpose();
  return jac;
}

SampleAverageLocationObjective::SampleAverageLocationObjective(Point anchor, std::vector<Point> samples)
    : anchor_(std::move(anchor)), samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("sample average needs at least one sample");
  for (const Point& s : samples_) {
    if (s.size() != anchor_.size()) throw std::invalid_argument("sample dimension mismatch");
  }
}

Eigen::VectorXd SampleAverageLocationObjective::values(const Point& x) const {
  double mean = 0.0;
  for (const Point& s : samples_) mean += (x - s).squaredNorm();
  mean /= static_cast<double>(samples_.size());
  return Eigen::Vector2d((x - anchor_).squaredNorm(), mean);
}

Eigen::MatrixXd SampleAverageLocationObjective::jacobian(const Point& x) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  for (const Point& s : samples_) grad += 2.0 * (x - s);
  grad /= static_cast<double>(samples_.size());
  Eigen::MatrixXd jac(2, x.size());
  jac.row(0) = 2.0 * (x - anchor_).transpose();
  jac.row(1) = grad.transpose();
  return jac;
}

namespace {

struct Gaussian {
  Eigen::Vector2d center;
  double sigma;
  double weight;
};

constexpr double kLhScale = std::numbers::sqrt2 / 2.0;

const std::array<Gaussian, 2>& lh_bumps() {
  static const std::array<Gaussian, 2> bumps{{{Eigen::Vector2d(0.0, 0.0), 0.65, 0.2},
                                              {Eigen::Vector2d(0.0, -1.5), 2.8, 1.5}}};
  return bumps;
}

double gaussian(const Point& x, const Gaussian& g) {
  return std::sqrt(2.0 * std::numbers::pi / g.sigma) *
         std::exp(-(x - g.center).squaredNorm() / (g.sigma * g.sigma));
}

}  // namespace

double Lh22Objective::bump(const Point& x) {
  double b = 0.0;
  for (const Gaussian& g : lh_bumps()) b += g.weight * gaussian(x, g);
  return b;
}

Eigen::Vector2d Lh22Objective::bump_gradient(const Point& x) {
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  for (const Gaussian& g : lh_bumps()) {
    grad += g.weight * gaussian(x, g) * (-2.0 / (g.sigma * g.sigma)) * (x - g.center);
  }
  return grad;
}

Eigen::VectorXd Lh22Objective::values(const Point& x) const {
  const double b = bump(x);
  return Eigen::Vector2d(-kLhScale * (x[0] + b), -kLhScale * (-x[0] + b));
}

Eigen::MatrixXd Lh22Objective::jacobian(const Point& x) const {
  const Eigen::Vector2d gb = bump_gradient(x);
  Eigen::Matrix2d jac;
  jac << -kLhScale * (1.0 + gb[0]), -kLhScale * gb[1],  //
      -kLhScale * (-1.0 + gb[0]), -kLhScale * gb[1];
  return jac;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::vector<double> parse_parameters(const std::string& spec, std::string& name) {
  const auto open = spec.find('(');
  if (open == std::string::npos) {
    name = spec;
    return {};
  }
  if (spec.back() != ')') throw std::invalid_argument("objective '" + spec + "': missing ')'");
  name = spec.substr(0, open);
  std::vector<double> params;
  std::stringstream inner(spec.substr(open + 1, spec.size() - open - 2));
  std::string field;
  while (std::getline(inner, field, ',')) params.push_back(csv::parse_double(field));
  return params;
}

}  // namespace

ObjectivePtr make_analytic_objective(const std::string& spec) {
  std::string name;
  const std::vector<double> params = parse_parameters(spec, name);
  const auto expect = [&](std::size_t count) {
    if (params.size() != count) {
      throw std::invalid_argument("objective '" + name + "' takes " + std::to_string(count) +
                                  " parameters, got " + std::to_string(params.size()));
    }
  };
  if (name == "circle") {
    expect(0);
    return std::make_shared<EllipseObjective>(1.0, 1.0);
  }
  if (name == "ellipse") {
    expect(2);
    return std::make_shared<EllipseObjective>(params[0], params[1]);
  }
  if (name == "location-expectation") {
    expect(0);
    return std::make_shared<LocationExpectationObjective>();
  }
  if (name == "lh22") {
    expect(0);
    return std::make_shared<Lh22Objective>();
  }
  throw std::invalid_argument("unknown objective '" + name + "'");
}

std::vector<std::string> analytic_objective_names() {
  return {"circle", "ellipse(a,b)", "location-expectation", "lh22"};
}

// ---------------------------------------------------------------------------
// Evaluation and KKT vectors

Eigen::VectorXd eval(const Objective& f, const Point& x) {
  if (x.size() != f.num_variables()) throw std::invalid_argument("eval: dimension mismatch");
  return f.values(x);
}

Eigen::MatrixXd eval_jacobian(const Objective& f, const Point& x) {
  if (x.size() != f.num_variables()) throw std::invalid_argument("eval_jacobian: dimension mismatch");
  return f.jacobian(x);
}

double kkt_residual(const Objective& f, const Point& x, const Eigen::VectorXd& alpha,
                    const SimplexTolerance& tol) {
  if (alpha.size() != f.num_objectives()) throw std::invalid_argument("kkt_residual: alpha has wrong size");
  if (const std::string why = simplex_violation(alpha, tol); !why.empty()) {
    throw SimplexError("kkt_residual: " + why);
  }
  return (eval_jacobian(f, x).transpose() * alpha).norm();
}

namespace {

constexpr int kMaxFaceEnumerationObjectives = 6;

// Orthonormal basis of {z : sum(z) = 0} in R^m, as columns.
Eigen::MatrixXd sum_zero_basis(Eigen::Index m) {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(m, 1);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  return q.rightCols(m - 1);
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& g, const std::vector<int>& cols) {
  Eigen::MatrixXd out(g.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = g.col(cols[j]);
  return out;
}

std::vector<int> members(unsigned mask, int k) {
  std::vector<int> out;
  for (int i = 0; i < k; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

Eigen::VectorXd expand(const Eigen::VectorXd& face_alpha, const std::vector<int>& cols, int k) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k);
  for (std::size_t j = 0; j < cols.size(); ++j) alpha[cols[j]] = face_alpha[static_cast<Eigen::Index>(j)];
  return alpha;
}

AlphaFit enumerate_faces(const Eigen::MatrixXd& g) {
  const int k = static_cast<int>(g.cols());
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double feasibility = 1e-12;

  // Phase 1: smallest residual over all faces.
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_alpha;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    const std::vector<int> cols = members(mask, k);
    const auto m = static_cast<Eigen::Index>(cols.size());
    const Eigen::MatrixXd gs = select_columns(g, cols);
    Eigen::VectorXd a = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    if (m > 1) {
      const Eigen::MatrixXd z = sum_zero_basis(m);
      const Eigen::MatrixXd gz = gs * z;
      const Eigen::VectorXd y = gz.completeOrthogonalDecomposition().solve(-(gs * a));
      a += z * y;
    }
    if (a.minCoeff() < -feasibility) continue;
    const double r = (gs * a).norm();
    if (r < best) {
      best = r;
      best_alpha = expand(a, cols, k);
    }
  }

  // Phase 2: among all simplex points attaining the same G alpha, the one
  // closest to the barycenter.
  const Eigen::VectorXd target = g * best_alpha;
  const double consistency = 1e-10 * scale;
  const double bary = 1.0 / static_cast<double>(k);
  double best_distance = (best_alpha.array() - bary).matrix().squaredNorm();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    const std::vector<int> cols = members(mask, k);
    const auto m = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd c(g.rows() + 1, m);
    c.row(0).setOnes();
    c.bottomRows(g.rows()) = select_columns(g, cols);
    Eigen::VectorXd rhs(g.rows() + 1);
    rhs << 1.0, target;
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(m, bary);
    const Eigen::VectorXd a = b + c.completeOrthogonalDecomposition().solve(rhs - c * b);
    if (a.minCoeff() < -feasibility || (c * a - rhs).norm() > consistency) continue;
    const Eigen::VectorXd full = expand(a, cols, k);
    const double dist = (full.array() - bary).matrix().squaredNorm();
    if (dist < best_distance) {
      best_distance = dist;
      best_alpha = full;
    }
  }
  AlphaFit fit;
  fit.alpha = clip_into_simplex(best_alpha);
  fit.residual = (g * fit.alpha).norm();
  return fit;
}

}  // namespace

AlphaFit best_simplex_combination(const Eigen::MatrixXd& gradients) {
  const auto k = gradients.cols();
  if (k < 1) throw std::invalid_argument("best_simplex_combination: no gradients");
  if (k == 1) return {Eigen::VectorXd::Ones(1), gradients.col(0).norm()};
  if (k == 2) {
    const Eigen::VectorXd g1 = gradients.col(0);
    const Eigen::VectorXd g2 = gradients.col(1);
    const Eigen::VectorXd d = g1 - g2;
    const double den = d.squaredNorm();
    const double scale = std::max(g1.norm(), g2.norm());
    double a = 0.5;
    if (den > 1e-28 * scale * scale) a = std::clamp(-g2.dot(d) / den, 0.0, 1.0);
    AlphaFit fit{Eigen::Vector2d(a, 1.0 - a), 0.0};
    fit.residual = (a * g1 + (1.0 - a) * g2).norm();
    return fit;
  }
  if (k > kMaxFaceEnumerationObjectives) {
    throw std::invalid_argument("best_simplex_combination: face enumeration supports k <= " +
                                std::to_string(kMaxFaceEnumerationObjectives));
  }
  return enumerate_faces(gradients);
}

AlphaFit best_alpha(const Objective& f, const Point& x) {
  return best_simplex_combination(eval_jacobian(f, x).transpose());
}

}  // namespace imop
