#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace imop {

using Point = Eigen::VectorXd;

/// Exponent tuple (l_1, ..., l_n) of a monomial x_1^{l_1} ... x_n^{l_n}.
struct MultiIndex {
  std::vector<int> exponents;

  int num_variables() const { return static_cast<int>(exponents.size()); }
  int degree() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Value of the monomial at x. Zero exponents contribute a factor of one.
double eval_monomial(const MultiIndex& index, const Point& x);

/// Gradient of a single monomial, by the power rule.
Eigen::VectorXd eval_monomial_gradient(const MultiIndex& index, const Point& x);

/**
 * All non-constant monomials in n variables of total degree at most max_degree.
 *
 * Indices are sorted lexicographically on the reversed exponent tuple, so that
 * for n = 2 and degree 3 the order is
 *   x1, x1^2, x1^3, x2, x1 x2, x1^2 x2, x2^2, x1 x2^2, x2^3.
 * The basis size is C(n + max_degree, n) - 1.
 */
class MonomialBasis {
 public:
  MonomialBasis(int num_variables, int max_degree);

  int num_variables() const { return num_variables_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t j) const { return indices_[j]; }

  /// b_1(x), ..., b_d(x).
  Eigen::VectorXd values(const Point& x) const;

  /// n x d matrix whose column j is the gradient of b_j at x.
  Eigen::MatrixXd gradients(const Point& x) const;

  friend bool operator==(const MonomialBasis& a, const MonomialBasis& b) {
    return a.num_variables_ == b.num_variables_ && a.max_degree_ == b.max_degree_;
  }

 private:
  // powers(i, p) = x_i^p for p = 0..max_degree
  Eigen::MatrixXd power_table(const Point& x) const;
  void check_dimension(const Point& x) const;

  int num_variables_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
};

MonomialBasis generate_monomial_basis(int num_variables, int max_degree);

/// C(n + l, n) - 1, the number of non-constant monomials of degree <= l.
std::size_t monomial_count(int num_variables, int max_degree);

/// Matrix form of the gradients; same as basis.gradients(x).
inline Eigen::MatrixXd eval_basis_gradients(const MonomialBasis& basis, const Point& x) {
  return basis.gradients(x);
}

}  // namespace imop
