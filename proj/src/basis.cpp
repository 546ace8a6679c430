#include "imop/basis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace imop {

int MultiIndex::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

double eval_monomial(const MultiIndex& index, const Point& x) {
  if (index.num_variables() != x.size()) {
    throw std::invalid_argument("eval_monomial: multi-index has " +
                                std::to_string(index.num_variables()) + " variables, point has " +
                                std::to_string(x.size()));
  }
  double value = 1.0;
  for (int i = 0; i < index.num_variables(); ++i) {
    for (int p = 0; p < index.exponents[i]; ++p) value *= x[i];
  }
  return value;
}

Eigen::VectorXd eval_monomial_gradient(const MultiIndex& index, const Point& x) {
  const int n = index.num_variables();
  if (n != x.size()) throw std::invalid_argument("eval_monomial_gradient: dimension mismatch");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (index.exponents[i] == 0) continue;
    double value = index.exponents[i];
    for (int m = 0; m < n; ++m) {
      const int p = index.exponents[m] - (m == i ? 1 : 0);
      for (int r = 0; r < p; ++r) value *= x[m];
    }
    grad[i] = value;
  }
  return grad;
}

namespace {

void enumerate(int var, int remaining, std::vector<int>& current, std::vector<MultiIndex>& out) {
  if (var == static_cast<int>(current.size())) {
    out.push_back(MultiIndex{current});
    return;
  }
  for (int p = 0; p <= remaining; ++p) {
    current[var] = p;
    enumerate(var + 1, remaining - p, current, out);
  }
  current[var] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int num_variables, int max_degree)
    : num_variables_(num_variables), max_degree_(max_degree) {
  if (num_variables < 1) throw std::invalid_argument("monomial basis needs at least one variable");
  if (max_degree < 1) throw std::invalid_argument("monomial basis needs max_degree >= 1");

  std::vector<int> current(num_variables, 0);
  enumerate(0, max_degree, current, indices_);
  std::erase_if(indices_, [](const MultiIndex& m) { return m.degree() == 0; });

  // reversed-lexicographic: l_n most significant
  std::sort(indices_.begin(), indices_.end(), [](const MultiIndex& a, const MultiIndex& b) {
    return std::lexicographical_compare(a.exponents.rbegin(), a.exponents.rend(),
                                        b.exponents.rbegin(), b.exponents.rend());
  });
}

void MonomialBasis::check_dimension(const Point& x) const {
  if (x.size() != num_variables_) {
    throw std::invalid_argument("basis has " + std::to_string(num_variables_) +
                                " variables, point has " + std::to_string(x.size()));
  }
}

Eigen::MatrixXd MonomialBasis::power_table(const Point& x) const {
  Eigen::MatrixXd powers(num_variables_, max_degree_ + 1);
  for (int i = 0; i < num_variables_; ++i) {
    powers(i, 0) = 1.0;
    for (int p = 1; p <= max_degree_; ++p) powers(i, p) = powers(i, p - 1) * x[i];
  }
  return powers;
}

Eigen::VectorXd MonomialBasis::values(const Point& x) const {
  check_dimension(x);
  const Eigen::MatrixXd powers = power_table(x);
  Eigen::VectorXd out(size());
  for (int j = 0; j < size(); ++j) {
    double v = 1.0;
    for (int i = 0; i < num_variables_; ++i) v *= powers(i, indices_[j].exponents[i]);
    out[j] = v;
  }
  return out;
}

Eigen::MatrixXd MonomialBasis::gradients(const Point& x) const {
  check_dimension(x);
  const Eigen::MatrixXd powers = power_table(x);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(num_variables_, size());
  for (int j = 0; j < size(); ++j) {
    const std::vector<int>& e = indices_[j].exponents;
    for (int i = 0; i < num_variables_; ++i) {
      if (e[i] == 0) continue;
      double v = e[i];
      for (int m = 0; m < num_variables_; ++m) v *= powers(m, e[m] - (m == i ? 1 : 0));
      grad(i, j) = v;
    }
  }
  return grad;
}

MonomialBasis generate_monomial_basis(int num_variables, int max_degree) {
  return MonomialBasis(num_variables, max_degree);
}

std::size_t monomial_count(int num_variables, int max_degree) {
  if (num_variables < 1 || max_degree < 0) return 0;
  // C(n + l, n) computed incrementally; exact for the sizes used here
  std::size_t c = 1;
  for (int i = 1; i <= num_variables; ++i) {
    c = c * static_cast<std::size_t>(max_degree + i) / static_cast<std::size_t>(i);
  }
  return c - 1;
}

}  // namespace imop
