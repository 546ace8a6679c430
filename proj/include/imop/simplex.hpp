#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace imop {

/// Slack allowed on the standard simplex for measured or estimated KKT vectors.
struct SimplexTolerance {
  double negativity = 1e-12;  // alpha_i >= -negativity
  double sum = 1e-9;          // |sum(alpha) - 1| <= sum
};

class SimplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True if alpha lies in the standard simplex up to the given slack.
bool in_simplex(const Eigen::VectorXd& alpha, const SimplexTolerance& tol = {});

/// Describes why alpha fails in_simplex; empty if it passes.
std::string simplex_violation(const Eigen::VectorXd& alpha, const SimplexTolerance& tol = {});

/**
 * Clamps negative entries to zero and rescales to unit sum.
 *
 * Throws SimplexError if alpha lies outside the slack. Vectors whose sum is
 * already within a few ulps of one are left untouched, so applying the
 * projection twice is the identity.
 */
Eigen::VectorXd project_into_simplex(const Eigen::VectorXd& alpha, const SimplexTolerance& tol = {});

/// Clip into [0, 1] componentwise and renormalize. Never throws unless all
/// components clip to zero.
Eigen::VectorXd clip_into_simplex(const Eigen::VectorXd& alpha);

}  // namespace imop
