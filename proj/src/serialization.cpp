#include "imop/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "imop/csv.hpp"

namespace imop {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string model_to_json(const InverseSolution& s, int indent) {
  const MonomialBasis& basis = s.objective.basis();
  std::vector<int> selected(static_cast<std::size_t>(s.selected_count));
  for (int i = 0; i < s.selected_count; ++i) selected[i] = i + 1;
  std::vector<int> flagged;
  for (int v : s.degeneracy.flagged) flagged.push_back(v + 1);

  nlohmann::json j;
  j["n"] = basis.num_variables();
  j["k"] = s.objective.num_objectives();
  j["max_degree"] = basis.max_degree();
  j["singular_values"] = to_std(s.spectrum.singular_values);
  j["selected"] = selected;
  j["coefficients"] = to_std(s.coefficients);
  j["threshold"] = s.threshold;
  j["residual_bound"] = s.residual_bound();
  j["chosen_vector"] = s.chosen_vector >= 0 ? nlohmann::json(s.chosen_vector + 1) : nlohmann::json(nullptr);
  j["dependence"] = to_std(s.degeneracy.dependence);
  j["degenerate_variables"] = flagged;
  j["notes"] = s.notes;
  return j.dump(indent);
}

void save_model(const InverseSolution& solution, const std::filesystem::path& path) {
  write_file(path, model_to_json(solution) + "\n");
}

PolynomialObjective model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const int degree = j.at("max_degree").get<int>();
    const auto c = j.at("coefficients").get<std::vector<double>>();
    const MonomialBasis basis(n, degree);
    if (k < 1 || c.size() != static_cast<std::size_t>(k) * basis.size()) {
      throw std::invalid_argument("model has " + std::to_string(c.size()) + " coefficients, expected k*d = " +
                                  std::to_string(k) + "*" + std::to_string(basis.size()));
    }
    return reconstruct_objective(Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())),
                                 basis, k);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed model JSON: ") + e.what());
  }
}

PolynomialObjective load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_spectrum(const SvdSpectrum& spectrum, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# index,singular_value\n";
  for (int i = 0; i < spectrum.size(); ++i) csv::write_row(out, {static_cast<double>(i + 1), spectrum.singular_values[i]});
  write_file(path, out.str());
}

}  // namespace imop
