#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/basis.hpp"
#include "imop/simplex.hpp"

namespace imop {

/// Smooth objective vector f : R^n -> R^k with a closed-form Jacobian.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int num_variables() const = 0;
  virtual int num_objectives() const = 0;
  virtual std::string name() const = 0;

  virtual Eigen::VectorXd values(const Point& x) const = 0;

  /// k x n; row i is the transposed gradient of f_i.
  virtual Eigen::MatrixXd jacobian(const Point& x) const = 0;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// f_i(x) = sum_j C(i, j) b_j(x) over a monomial basis.
class PolynomialObjective final : public Objective {
 public:
  PolynomialObjective(MonomialBasis basis, Eigen::MatrixXd coefficients);

  int num_variables() const override { return basis_.num_variables(); }
  int num_objectives() const override { return static_cast<int>(coefficients_.rows()); }
  std::string name() const override { return "polynomial"; }

  Eigen::VectorXd values(const Point& x) const override;
  Eigen::MatrixXd jacobian(const Point& x) const override;

  const MonomialBasis& basis() const { return basis_; }
  /// k x d, one row per objective.
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  /// Stacked objective-major: (c_11..c_1d, c_21..c_2d, ...).
  Eigen::VectorXd coefficient_vector() const;

  PolynomialObjective scaled(double factor) const;

 private:
  MonomialBasis basis_;
  Eigen::MatrixXd coefficients_;
};

/// Inverse of coefficient_vector(): split c of length k*d into k objectives.
PolynomialObjective reconstruct_objective(const Eigen::VectorXd& c, const MonomialBasis& basis,
                                          int num_objectives);

/// (-3a^2 x1 + x1^3 + x2^3, -3b^2 x2 + x1^3 + x2^3); critical set is the ellipse x1^2/a^2 + x2^2/b^2 = 1.
class EllipseObjective final : public Objective {
 public:
  EllipseObjective(double a, double b);

  int num_variables() const override { return 2; }
  int num_objectives() const override { return 2; }
  std::string name() const override;

  Eigen::VectorXd values(const Point& x) const override;
  Eigen::MatrixXd jacobian(const Point& x) const override;

  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double a_;
  double b_;
};

/// Expected value of the stochastic location problem with a = (-1,-1), xi = (U[0,2], 0):
/// (|x - a|^2, |x - (1,0)|^2 + 1/3).
class LocationExpectationObjective final : public Objective {
 public:
  int num_variables() const override { return 2; }
  int num_objectives() const override { return 2; }
  std::string name() const override { return "location-expectation"; }

  Eigen::VectorXd values(const Point& x) const override;
  Eigen::MatrixXd jacobian(const Point& x) const override;
};

/// Sample average (|x - a|^2, mean_j |x - xi_j|^2) for a fixed sample set.
class SampleAverageLocationObjective final : public Objective {
 public:
  SampleAverageLocationObjective(Point anchor, std::vector<Point> samples);

  int num_variables() const override { return static_cast<int>(anchor_.size()); }
  int num_objectives() const override { return 2; }
  std::string name() const override { return "saa-location"; }

  Eigen::VectorXd values(const Point& x) const override;
  Eigen::MatrixXd jacobian(const Point& x) const override;

  const std::vector<Point>& samples() const { return samples_; }

 private:
  Point anchor_;
  std::vector<Point> samples_;
};

/**
 * Two-objective bump problem on R^2:
 *   f(x) = -( s x1 + s b(x), -s x1 + s b(x) ),  s = sqrt(2)/2,
 *   b(x) = 0.2 g(x, (0,0), 0.65) + 1.5 g(x, (0,-1.5), 2.8),
 *   g(x, p, sigma) = sqrt(2 pi / sigma) exp(-|x - p|^2 / sigma^2).
 */
class Lh22Objective final : public Objective {
 public:
  int num_variables() const override { return 2; }
  int num_objectives() const override { return 2; }
  std::string name() const override { return "lh22"; }

  Eigen::VectorXd values(const Point& x) const override;
  Eigen::MatrixXd jacobian(const Point& x) const override;

  static double bump(const Point& x);
  static Eigen::Vector2d bump_gradient(const Point& x);
};

/**
 * Built-in analytic objectives by registry name:
 *   circle, ellipse(a,b), location-expectation, lh22.
 * Throws std::invalid_argument for unknown names or bad parameter lists.
 */
ObjectivePtr make_analytic_objective(const std::string& spec);
std::vector<std::string> analytic_objective_names();

// ---------------------------------------------------------------------------

Eigen::VectorXd eval(const Objective& f, const Point& x);
Eigen::MatrixXd eval_jacobian(const Objective& f, const Point& x);

/// |Df(x)^T alpha|_2. alpha must lie in the simplex up to the given slack.
double kkt_residual(const Objective& f, const Point& x, const Eigen::VectorXd& alpha,
                    const SimplexTolerance& tol = {});

struct AlphaFit {
  Eigen::VectorXd alpha;
  double residual = 0.0;
};

/**
 * Minimizes |G alpha|_2 over the simplex, G = n x k matrix of gradients.
 *
 * k = 2 is solved in closed form; 3 <= k <= 6 by enumerating the faces of the
 * simplex. When the minimizer is not unique the one closest to the barycenter
 * is returned.
 */
AlphaFit best_simplex_combination(const Eigen::MatrixXd& gradients);

/// best_simplex_combination applied to Df(x)^T.
AlphaFit best_alpha(const Objective& f, const Point& x);

/// Default cutoff on best_alpha's residual for calling a point Pareto critical.
inline constexpr double kDefaultCriticalityTolerance = 1e-6;

inline bool is_pareto_critical(const Objective& f, const Point& x,
                               double tol = kDefaultCriticalityTolerance) {
  return best_alpha(f, x).residual <= tol;
}

}  // namespace imop
