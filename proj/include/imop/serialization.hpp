#pragma once

#include <filesystem>
#include <string>

#include "imop/objective.hpp"
#include "imop/solver.hpp"

namespace imop {

/**
 * Model JSON:
 *   {"n", "k", "max_degree", "singular_values", "selected" (1-based),
 *    "coefficients" (objective-major), "threshold", "chosen_vector",
 *    "dependence", "degenerate_variables", "notes"}
 */
std::string model_to_json(const InverseSolution& solution, int indent = 2);
void save_model(const InverseSolution& solution, const std::filesystem::path& path);

/// Rebuilds the polynomial objective from "n", "k", "max_degree" and "coefficients".
PolynomialObjective model_from_json(const std::string& text);
PolynomialObjective load_model(const std::filesystem::path& path);

/// Two columns: 1-based index, singular value.
void save_spectrum(const SvdSpectrum& spectrum, const std::filesystem::path& path);

}  // namespace imop
