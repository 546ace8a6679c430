#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imop/basis.hpp"
#include "imop/kkt_system.hpp"
#include "imop/objective.hpp"

namespace imop {

/**
 * Singular values of the KKT system in ascending order with the matching
 * right-singular vectors as columns.
 *
 * When the system has fewer rows than columns, the missing k*d - n*N values
 * are reported as exact zeros; their vectors span the null space.
 */
struct SvdSpectrum {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd right_vectors;
  int padded_zeros = 0;

  int size() const { return static_cast<int>(singular_values.size()); }
  double largest() const { return singular_values.size() ? singular_values.maxCoeff() : 0.0; }
  Eigen::VectorXd vector(int i) const { return right_vectors.col(i); }
};

SvdSpectrum svd_spectrum(const Eigen::MatrixXd& matrix);
SvdSpectrum svd_spectrum(const KktSystem& system);

/// s is numerically zero when s <= max(atol, rtol * s_max).
struct ZeroTolerance {
  double atol = 1e-12;
  double rtol = 1e-10;

  double cutoff(const SvdSpectrum& spectrum) const;
};

/// Number of leading singular values that are numerically zero.
int count_zero_singular_values(const SvdSpectrum& spectrum, const ZeroTolerance& zero = {});

/// Size of the maximal prefix with s_i <= threshold; I = {1, ..., result}. May be 0.
int select_indices(const SvdSpectrum& spectrum, double threshold);

/**
 * Largest-gap threshold: the count i* maximizing s_{i*+1} / max(s_{i*}, atol),
 * searching i* >= first_candidate (1-based count). Returns the count.
 */
int gap_selection(const SvdSpectrum& spectrum, int first_candidate = 1, double atol = 1e-12);

/**
 * c = sum_i weights_i v_i over the first `count` singular vectors.
 * Normalized to unit length unless normalize is false.
 */
Eigen::VectorXd compose_coefficient(const SvdSpectrum& spectrum, int count,
                                    const Eigen::VectorXd& weights, bool normalize = true);

/// Largest absolute coefficient among monomials that involve each variable.
struct DegeneracyReport {
  Eigen::VectorXd dependence;
  std::vector<int> flagged;  // 0-based variable indices with dependence <= tolerance

  bool degenerate() const { return !flagged.empty(); }
};

/// Coefficients are measured relative to the Euclidean norm of the coefficient vector.
DegeneracyReport variable_dependence(const PolynomialObjective& f, double tolerance = 1e-8);

/// True when the system is not underdetermined, i.e. n * N >= k * d.
bool satisfies_sample_bound(int num_variables, int num_points, int num_objectives, int basis_size);

/// Largest degree l with k * (C(n + l, n) - 1) <= n * N; 0 if even degree 1 violates it.
int max_admissible_degree(int num_variables, int num_points, int num_objectives);

std::string sample_bound_diagnostic(int num_variables, int num_points, int num_objectives,
                                    int basis_size);

class OverfittingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::optional<double> threshold;          // explicit s-bar; largest gap otherwise
  std::optional<Eigen::VectorXd> weights;   // lambda over the selected vectors; v_1 otherwise
  bool skip_degenerate = false;
  bool normalize = true;                    // false only allowed when s_{i*} is numerically zero
  bool enforce_sample_bound = false;        // throw OverfittingError when n*N < k*d
  ZeroTolerance zero;
  double degeneracy_tolerance = 1e-8;
};

struct InverseSolution {
  SvdSpectrum spectrum;
  double threshold = 0.0;
  int selected_count = 0;    // I = {1, ..., selected_count}
  int chosen_vector = -1;    // 0-based singular vector used when no weights are given
  Eigen::VectorXd coefficients;
  PolynomialObjective objective;
  DegeneracyReport degeneracy;
  std::vector<int> degenerate_vectors;  // 0-based indices of flagged v_i within I
  std::vector<std::string> notes;

  /// s_{i*}, the bound on every data point's KKT residual.
  double residual_bound() const { return spectrum.singular_values[selected_count - 1]; }
};

/// Assemble, decompose, select, compose and reconstruct.
InverseSolution solve_inverse(const DataSet& data, const MonomialBasis& basis,
                              const SolveOptions& options = {});

/// Smallest singular value for each degree (0 when underdetermined).
std::map<int, double> degree_sweep(const DataSet& data, const std::vector<int>& degrees);

}  // namespace imop
