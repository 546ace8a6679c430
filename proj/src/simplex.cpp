#include "imop/simplex.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace imop {

std::string simplex_violation(const Eigen::VectorXd& alpha, const SimplexTolerance& tol) {
  if (alpha.size() == 0) return "empty KKT vector";
  std::ostringstream msg;
  msg.precision(17);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha[i])) {
      msg << "alpha_" << i + 1 << " is not finite";
      return msg.str();
    }
    if (alpha[i] < -tol.negativity) {
      msg << "alpha_" << i + 1 << " = " << alpha[i] << " is negative";
      return msg.str();
    }
  }
  const double s = alpha.sum();
  if (std::abs(s - 1.0) > tol.sum) {
    msg << "components sum to " << s << " instead of 1";
    return msg.str();
  }
  return {};
}

bool in_simplex(const Eigen::VectorXd& alpha, const SimplexTolerance& tol) {
  return simplex_violation(alpha, tol).empty();
}

Eigen::VectorXd project_into_simplex(const Eigen::VectorXd& alpha, const SimplexTolerance& tol) {
  if (const std::string why = simplex_violation(alpha, tol); !why.empty()) throw SimplexError(why);
  Eigen::VectorXd out = alpha.cwiseMax(0.0);
  const double s = out.sum();
  const double ulps = 4.0 * static_cast<double>(alpha.size()) * std::numeric_limits<double>::epsilon();
  if (std::abs(s - 1.0) > ulps) out /= s;
  return out;
}

Eigen::VectorXd clip_into_simplex(const Eigen::VectorXd& alpha) {
  Eigen::VectorXd out = alpha.cwiseMax(0.0).cwiseMin(1.0);
  const double s = out.sum();
  if (!(s > 0.0)) throw SimplexError("all components clip to zero");
  return out / s;
}

}  // namespace imop
