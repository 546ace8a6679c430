#include "imop/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace imop {

SvdSpectrum svd_spectrum(const Eigen::MatrixXd& matrix) {
  const Eigen::Index rows = matrix.rows();
  const Eigen::Index cols = matrix.cols();
  if (cols == 0) throw std::invalid_argument("svd_spectrum: system has no columns");
  if (!matrix.allFinite()) {
    throw std::runtime_error("svd_spectrum: non-finite entries in " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " system");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner> svd(matrix,
                                                                                  Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("svd_spectrum: SVD failed on " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " system");
  }

  // Eigen returns min(rows, cols) values in descending order; the remaining
  // columns of the full V span the null space.
  const Eigen::Index r = std::min(rows, cols);
  const Eigen::MatrixXd& v = svd.matrixV();
  SvdSpectrum out;
  out.padded_zeros = static_cast<int>(cols - r);
  out.singular_values = Eigen::VectorXd::Zero(cols);
  out.right_vectors.resize(cols, cols);
  for (Eigen::Index i = 0; i < cols - r; ++i) out.right_vectors.col(i) = v.col(r + i);
  for (Eigen::Index i = 0; i < r; ++i) {
    out.singular_values[cols - r + i] = svd.singularValues()[r - 1 - i];
    out.right_vectors.col(cols - r + i) = v.col(r - 1 - i);
  }
  return out;
}

SvdSpectrum svd_spectrum(const KktSystem& system) { return svd_spectrum(system.matrix); }

double ZeroTolerance::cutoff(const SvdSpectrum& spectrum) const {
  return std::max(atol, rtol * spectrum.largest());
}

int count_zero_singular_values(const SvdSpectrum& spectrum, const ZeroTolerance& zero) {
  return select_indices(spectrum, zero.cutoff(spectrum));
}

int select_indices(const SvdSpectrum& spectrum, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("select_indices: threshold must be >= 0");
  int count = 0;
  while (count < spectrum.size() && spectrum.singular_values[count] <= threshold) ++count;
  return count;
}

int gap_selection(const SvdSpectrum& spectrum, int first_candidate, double atol) {
  const int m = spectrum.size();
  if (m == 0) throw std::invalid_argument("gap_selection: empty spectrum");
  first_candidate = std::clamp(first_candidate, 1, m);
  if (first_candidate == m) return m;
  int best = first_candidate;
  double best_ratio = -1.0;
  for (int i = first_candidate; i < m; ++i) {
    const double ratio = spectrum.singular_values[i] / std::max(spectrum.singular_values[i - 1], atol);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd compose_coefficient(const SvdSpectrum& spectrum, int count,
                                    const Eigen::VectorXd& weights, bool normalize) {
  if (count < 1 || count > spectrum.size()) {
    throw std::invalid_argument("compose_coefficient: index set must be a nonempty prefix of the spectrum");
  }
  if (weights.size() != count) {
    throw std::invalid_argument("compose_coefficient: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(count) + " selected vectors");
  }
  if (weights.isZero(0.0)) throw std::invalid_argument("compose_coefficient: weights are all zero");
  Eigen::VectorXd c = spectrum.right_vectors.leftCols(count) * weights;
  if (normalize) {
    const double norm = c.norm();
    if (norm == 0.0) throw std::invalid_argument("compose_coefficient: combination vanishes");
    c /= norm;
  }
  return c;
}

DegeneracyReport variable_dependence(const PolynomialObjective& f, double tolerance) {
  const MonomialBasis& basis = f.basis();
  const Eigen::MatrixXd& coeffs = f.coefficients();
  const double scale = coeffs.norm();
  const int n = basis.num_variables();
  DegeneracyReport report;
  report.dependence = Eigen::VectorXd::Zero(n);
  if (scale > 0.0) {
    for (int j = 0; j < basis.size(); ++j) {
      const double m = coeffs.col(j).cwiseAbs().maxCoeff() / scale;
      for (int v = 0; v < n; ++v) {
        if (basis[j].exponents[v] > 0) report.dependence[v] = std::max(report.dependence[v], m);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (report.dependence[v] <= tolerance) report.flagged.push_back(v);
  }
  return report;
}

bool satisfies_sample_bound(int num_variables, int num_points, int num_objectives, int basis_size) {
  return static_cast<long long>(num_objectives) * basis_size <=
         static_cast<long long>(num_variables) * num_points;
}

int max_admissible_degree(int num_variables, int num_points, int num_objectives) {
  int degree = 0;
  while (satisfies_sample_bound(num_variables, num_points, num_objectives,
                                monomial_count(num_variables, degree + 1))) {
    ++degree;
  }
  return degree;
}

std::string sample_bound_diagnostic(int num_variables, int num_points, int num_objectives,
                                    int basis_size) {
  std::ostringstream os;
  os << "overfitting: k*d = " << num_objectives << "*" << basis_size << " = "
     << static_cast<long long>(num_objectives) * basis_size << " exceeds n*N = " << num_variables
     << "*" << num_points << " = " << static_cast<long long>(num_variables) * num_points
     << "; need d <= n*N/k";
  const int admissible = max_admissible_degree(num_variables, num_points, num_objectives);
  if (admissible > 0) {
    os << " (largest admissible degree " << admissible << ")";
  } else {
    os << " (no degree is admissible with " << num_points << " points)";
  }
  return os.str();
}

namespace {

bool vector_is_degenerate(const SvdSpectrum& spectrum, int i, const MonomialBasis& basis, int k,
                          double tolerance) {
  return variable_dependence(reconstruct_objective(spectrum.vector(i), basis, k), tolerance).degenerate();
}

}  // namespace

InverseSolution solve_inverse(const DataSet& data, const MonomialBasis& basis, const SolveOptions& options) {
  const int n = data.num_variables();
  const int k = data.num_objectives();
  const int big_n = static_cast<int>(data.size());
  const bool bound_ok = satisfies_sample_bound(n, big_n, k, basis.size());
  if (options.enforce_sample_bound && !bound_ok) {
    throw OverfittingError(sample_bound_diagnostic(n, big_n, k, basis.size()));
  }
  if (options.threshold && !(*options.threshold >= 0.0)) {
    throw std::invalid_argument("threshold must be >= 0");
  }

  const KktSystem system = assemble_system(data, basis);
  SvdSpectrum spectrum = svd_spectrum(system);
  const int m = spectrum.size();

  std::vector<int> degenerate_vectors;
  int first_usable = 0;
  if (options.skip_degenerate) {
    while (first_usable < m &&
           vector_is_degenerate(spectrum, first_usable, basis, k, options.degeneracy_tolerance)) {
      degenerate_vectors.push_back(first_usable);
      ++first_usable;
    }
    if (first_usable == m) throw NoSolutionError("every singular vector yields a degenerate objective");
  }

  std::vector<std::string> notes;
  if (!bound_ok) notes.push_back(sample_bound_diagnostic(n, big_n, k, basis.size()));

  double threshold;
  if (options.threshold) {
    threshold = *options.threshold;
  } else {
    const int count = gap_selection(spectrum, first_usable + 1, options.zero.atol);
    threshold = spectrum.singular_values[count - 1];
  }
  int count = select_indices(spectrum, threshold);
  if (count == 0) {
    std::ostringstream os;
    os << "no solution under threshold " << threshold << " (smallest singular value "
       << spectrum.singular_values[0] << ")";
    throw NoSolutionError(os.str());
  }

  int chosen = -1;
  Eigen::VectorXd c;
  if (options.weights) {
    c = compose_coefficient(spectrum, count, *options.weights, options.normalize);
  } else {
    chosen = first_usable;
    if (chosen >= count) {
      std::ostringstream os;
      os << "threshold " << threshold << " admits only degenerate vectors; raised to s_"
         << chosen + 1 << " = " << spectrum.singular_values[chosen];
      notes.push_back(os.str());
      threshold = spectrum.singular_values[chosen];
      count = select_indices(spectrum, threshold);
    }
    c = spectrum.vector(chosen);
  }
  if (!options.normalize) {
    if (spectrum.singular_values[count - 1] > options.zero.cutoff(spectrum)) {
      throw std::invalid_argument("unnormalized coefficients require s_i* to be numerically zero");
    }
  }
  if (options.skip_degenerate) {
    for (int i = first_usable + 1; i < count; ++i) {
      if (vector_is_degenerate(spectrum, i, basis, k, options.degeneracy_tolerance)) {
        degenerate_vectors.push_back(i);
      }
    }
  }

  PolynomialObjective objective = reconstruct_objective(c, basis, k);
  DegeneracyReport degeneracy = variable_dependence(objective, options.degeneracy_tolerance);
  if (degeneracy.degenerate()) {
    std::ostringstream os;
    os << "degenerate objective: no dependence on variable";
    for (int v : degeneracy.flagged) os << " x" << v + 1;
    notes.push_back(os.str());
  }

  return InverseSolution{std::move(spectrum), threshold, count, chosen, std::move(c),
                         std::move(objective), std::move(degeneracy), std::move(degenerate_vectors),
                         std::move(notes)};
}

std::map<int, double> degree_sweep(const DataSet& data, const std::vector<int>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("degree_sweep: no degrees given");
  std::map<int, double> out;
  for (int degree : degrees) {
    if (degree < 1) throw std::invalid_argument("degree_sweep: degree must be >= 1");
    const MonomialBasis basis(data.num_variables(), degree);
    out[degree] = svd_spectrum(assemble_system(data, basis)).singular_values[0];
  }
  return out;
}

}  // namespace imop
