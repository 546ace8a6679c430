// imop: recover multiobjective problems from Pareto critical data.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imop/alpha_estimation.hpp"
#include "imop/basis.hpp"
#include "imop/critical_set.hpp"
#include "imop/csv.hpp"
#include "imop/generators.hpp"
#include "imop/kkt_system.hpp"
#include "imop/objective.hpp"
#include "imop/serialization.hpp"
#include "imop/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(imop::csv::parse_double(item));
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty degree range " + text);
    for (int d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  for (double d : parse_list(text)) {
    if (d != static_cast<int>(d)) throw std::invalid_argument("degree must be an integer: " + text);
    out.push_back(static_cast<int>(d));
  }
  return out;
}

json read_sidecar(const fs::path& data) {
  const fs::path side = fs::path(data.string() + ".json");
  if (!fs::exists(side)) return json::object();
  std::ifstream in(side);
  return json::parse(in, nullptr, false);
}

/// n and k from flags, falling back to the data file's sidecar.
void resolve_dimensions(const std::string& data, int& n, int& k) {
  if (n > 0 && k > 0) return;
  const json side = read_sidecar(data);
  if (n <= 0 && side.is_object() && side.contains("n")) n = side["n"].get<int>();
  if (k <= 0 && side.is_object() && side.contains("k")) k = side["k"].get<int>();
  if (n <= 0 || k <= 0) {
    throw std::invalid_argument("dimensions unknown: pass --n and --k or provide " + data + ".json");
  }
}

std::vector<imop::Point> read_points(const std::string& path, int n) {
  std::vector<imop::Point> pts;
  for (const auto& row : imop::csv::read_numeric(path)) {
    if (row.values.size() < static_cast<std::size_t>(n)) {
      throw imop::csv::ParseError(row.line, "expected at least " + std::to_string(n) + " columns");
    }
    pts.emplace_back(Eigen::Map<const Eigen::VectorXd>(row.values.data(), n));
  }
  return pts;
}

std::string join(const Eigen::VectorXd& v, std::size_t limit) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size() && static_cast<std::size_t>(i) < limit; ++i) {
    if (i) out += ", ";
    out += imop::csv::format_double(v[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string name;
  std::string out;
  int n_points = 1000;
  double a = 2.0;
  double b = 1.0;
  int per_segment = 500;
  int samples = 50;
  int scalarizations = 1000;
  bool shared_samples = false;
  bool analytic = false;
  int weights = 26;
  int starts_per_axis = 4;
  std::string box;
  bool keep_all = false;
  double grad_tol = 1e-8;
  int max_iter = 10000;
};

int cmd_generate(const GenerateArgs& g, const Globals& globals) {
  json params = json::object();
  std::optional<imop::DataSet> data;
  json report = json::object();

  if (g.name == "circle") {
    params["n_points"] = g.n_points;
    data = imop::gen_circle(g.n_points);
  } else if (g.name == "ellipse") {
    params = {{"n_points", g.n_points}, {"a", g.a}, {"b", g.b}};
    data = imop::gen_ellipse(g.a, g.b, g.n_points);
  } else if (g.name == "three-lines") {
    params["per_segment"] = g.per_segment;
    data = imop::gen_three_lines(g.per_segment);
  } else if (g.name == "saa-location") {
    imop::SaaConfig cfg;
    cfg.sample_count = g.samples;
    cfg.scalarization_count = g.scalarizations;
    cfg.seed = globals.seed;
    cfg.shared_samples = g.shared_samples;
    cfg.analytic = g.analytic;
    cfg.descent.gradient_tolerance = g.grad_tol;
    cfg.descent.max_iterations = g.max_iter;
    params = {{"samples", g.samples},       {"scalarizations", g.scalarizations},
              {"shared_samples", g.shared_samples}, {"analytic", g.analytic}};
    auto res = imop::gen_saa_location(cfg);
    report = {{"attempted", res.attempted}, {"failed", res.failed}};
    data = std::move(res.data);
  } else if (g.name.rfind("scalarize:", 0) == 0) {
    const auto f = imop::make_analytic_objective(g.name.substr(10));
    imop::ScalarizeOptions opts;
    opts.descent.gradient_tolerance = g.grad_tol;
    opts.descent.max_iterations = g.max_iter;
    opts.keep_all_minima = g.keep_all;
    if (g.box.empty()) throw std::invalid_argument("scalarize needs --box for the start points");
    const imop::Box box = imop::Box::parse(g.box);
    opts.descent.box = box;
    params = {{"objective", g.name.substr(10)}, {"weights", g.weights},  {"box", g.box},
              {"starts_per_axis", g.starts_per_axis}, {"keep_all_minima", g.keep_all}};
    auto res = imop::gen_scalarized_dataset(*f, g.weights, imop::grid_starts(box, g.starts_per_axis), opts);
    report = {{"attempted", res.attempted}, {"failed", res.failed}};
    if (!globals.quiet && !res.failed.empty()) {
      std::cerr << res.failed.size() << " of " << res.attempted << " scalarizations did not converge\n";
    }
    data = std::move(res.data);
  } else {
    throw std::invalid_argument("unknown generator '" + g.name +
                                "' (circle, ellipse, three-lines, saa-location, scalarize:<objective>)");
  }

  imop::save_dataset(*data, g.out);
  json side = {{"n", data->num_variables()}, {"k", data->num_objectives()}, {"generator", g.name},
               {"params", params},           {"seed", globals.seed},          {"rows", data->size()}};
  if (!report.empty()) side["report"] = report;
  std::ofstream(g.out + ".json") << side.dump(2) << '\n';
  if (!globals.quiet) std::cerr << "wrote " << data->size() << " points to " << g.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct InferArgs {
  std::string data;
  std::string out;
  std::string spectrum;
  int n = 0;
  int k = 0;
  int degree = 3;
  std::string threshold = "gap";
  std::string weights;
  bool skip_degenerate = false;
  bool no_normalize = false;
  bool strict = false;
  double atol = 1e-12;
  double rtol = 1e-10;
  double degeneracy_tol = 1e-8;
};

int cmd_infer(InferArgs a, const Globals& globals) {
  resolve_dimensions(a.data, a.n, a.k);
  const imop::DataSet data = imop::load_dataset(a.data, a.n, a.k);
  const imop::MonomialBasis basis(a.n, a.degree);

  imop::SolveOptions opts;
  if (a.threshold != "gap") opts.threshold = imop::csv::parse_double(a.threshold);
  if (!a.weights.empty()) {
    const auto w = parse_list(a.weights);
    opts.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  opts.skip_degenerate = a.skip_degenerate;
  opts.normalize = !a.no_normalize;
  opts.enforce_sample_bound = a.strict;
  opts.zero = {a.atol, a.rtol};
  opts.degeneracy_tolerance = a.degeneracy_tol;

  const imop::InverseSolution sol = imop::solve_inverse(data, basis, opts);
  imop::save_model(sol, a.out);
  const std::string spectrum = a.spectrum.empty() ? a.out + ".spectrum.csv" : a.spectrum;
  imop::save_spectrum(sol.spectrum, spectrum);

  for (const auto& note : sol.notes) std::cerr << "note: " << note << '\n';
  if (!globals.quiet) {
    std::cout << "N = " << data.size() << ", d = " << basis.size() << ", k*d = " << sol.spectrum.size() << '\n'
              << "singular values: " << join(sol.spectrum.singular_values, 10)
              << (sol.spectrum.size() > 10 ? ", ..." : "") << '\n'
              << "zero singular values: " << imop::count_zero_singular_values(sol.spectrum, opts.zero) << '\n'
              << "threshold: " << imop::csv::format_double(sol.threshold) << ", I = {1.." << sol.selected_count
              << "}\n";
    if (sol.chosen_vector >= 0) std::cout << "coefficients: v_" << sol.chosen_vector + 1 << '\n';
    if (!sol.degenerate_vectors.empty()) {
      std::cout << "degenerate vectors:";
      for (int i : sol.degenerate_vectors) std::cout << " v_" << i + 1;
      std::cout << '\n';
    }
    std::cout << "variable dependence: " << join(sol.degeneracy.dependence, 64)
              << (sol.degeneracy.degenerate() ? " (degenerate)" : "") << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string data;
  std::string out;
  int n = 0;
  int k = 0;
  std::string degrees = "1..7";
};

int cmd_sweep(SweepArgs a, const Globals&) {
  resolve_dimensions(a.data, a.n, a.k);
  const imop::DataSet data = imop::load_dataset(a.data, a.n, a.k);
  const auto sweep = imop::degree_sweep(data, parse_degrees(a.degrees));
  Output out(a.out);
  out.stream() << "# degree,smallest_singular_value\n";
  for (const auto& [degree, s] : sweep) imop::csv::write_row(out.stream(), {static_cast<double>(degree), s});
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string model;
  std::string box;
  int resolution = 301;
  double tol = 1e-2;
  double link_radius = 0.0;
  std::string filter_data;
  double filter_radius = 0.1;
  std::string reference_data;
  std::string reference_cloud;
  std::string reference_objective;
  double reference_tol = 1e-2;
  std::string out;
  std::int64_t budget = imop::kDefaultNodeBudget;
};

int cmd_verify(const VerifyArgs& a, const Globals& globals) {
  const imop::PolynomialObjective f = imop::load_model(a.model);
  const int n = f.num_variables();
  const int k = f.num_objectives();
  const imop::Box box = imop::Box::parse(a.box);
  imop::CriticalPointCloud cloud = imop::grid_scan(f, box, a.resolution, a.tol, a.budget);
  const double radius = a.link_radius > 0 ? a.link_radius : (cloud.max_spacing() * 2.0);
  const imop::ComponentLabeling labels = imop::cluster_components(cloud, radius);
  cloud = imop::with_labels(std::move(cloud), labels);

  json report = {{"nodes_kept", cloud.size()}, {"link_radius", radius}, {"components", labels.num_components}};
  std::vector<std::size_t> sizes;
  for (const auto& m : labels.members()) sizes.push_back(m.size());
  report["component_sizes"] = sizes;

  if (!a.filter_data.empty()) {
    int dn = n, dk = k;
    resolve_dimensions(a.filter_data, dn, dk);
    const imop::DataSet data = imop::load_dataset(a.filter_data, dn, dk);
    cloud = imop::filter_near_data(cloud, data, a.filter_radius);
    std::map<int, std::size_t> kept;
    for (int l : cloud.labels) ++kept[l];
    report["filtered_nodes"] = cloud.size();
    report["filtered_components"] = kept.size();
  }

  std::optional<std::vector<imop::Point>> reference;
  if (!a.reference_data.empty()) {
    reference = read_points(a.reference_data, n);
  } else if (!a.reference_cloud.empty()) {
    reference = imop::load_cloud(a.reference_cloud, n, k).decision_points();
  } else if (!a.reference_objective.empty()) {
    const auto g = imop::make_analytic_objective(a.reference_objective);
    reference = imop::grid_scan(*g, box, a.resolution, a.reference_tol, a.budget).decision_points();
  }
  if (reference) {
    if (cloud.empty() || reference->empty()) {
      throw std::runtime_error("cannot compare: " + std::string(cloud.empty() ? "scan" : "reference") + " is empty");
    }
    report["hausdorff"] = imop::hausdorff(cloud.decision_points(), *reference);
  }

  if (!a.out.empty()) imop::save_cloud(cloud, a.out);
  if (!globals.quiet) std::cout << report.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string front;
  std::string out;
  std::string rejects;
  int k = 2;
  int n = 2;
  int neighborhood = 0;
};

int cmd_estimate_alpha(const EstimateArgs& a, const Globals& globals) {
  const imop::FrontCloud front = imop::load_front(a.front, a.k, a.n);
  const auto est = imop::estimate_kkt_vectors(front, a.neighborhood);
  const imop::DataSet data = imop::estimates_to_dataset(front, est);
  imop::save_dataset(data, a.out);
  std::ofstream(a.out + ".json") << json{{"n", a.n}, {"k", a.k}, {"generator", "estimate-alpha"},
                                        {"params", {{"front", a.front}, {"neighborhood", a.neighborhood}}},
                                        {"seed", globals.seed}, {"rows", data.size()}}
                                           .dump(2)
                                    << '\n';

  const std::string rejects = a.rejects.empty() ? a.out + ".rejects.csv" : a.rejects;
  std::ofstream rej(rejects);
  if (!rej) throw std::runtime_error("cannot write " + rejects);
  rej << "# row,reason\n";
  std::size_t flagged = 0;
  for (std::size_t j = 0; j < est.size(); ++j) {
    if (est[j].alpha) continue;
    ++flagged;
    rej << j + 1 << ",\"" << est[j].diagnostic << "\"\n";
  }
  if (!globals.quiet) {
    std::cerr << data.size() << " estimates written, " << flagged << " flagged (" << rejects << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string points;
  std::string out;
};

int cmd_eval(const EvalArgs& a, const Globals&) {
  const imop::PolynomialObjective f = imop::load_model(a.model);
  const int n = f.num_variables();
  const int k = f.num_objectives();
  Output out(a.out);
  std::ostream& os = out.stream();
  os << '#';
  for (int i = 0; i < n; ++i) os << (i ? ",x" : " x") << i + 1;
  for (int i = 0; i < k; ++i) os << ",f" << i + 1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) os << ",df" << i + 1 << "_dx" << j + 1;
  for (int i = 0; i < k; ++i) os << ",alpha" << i + 1;
  os << ",residual\n";
  for (const imop::Point& x : read_points(a.points, n)) {
    const Eigen::VectorXd v = f.values(x);
    const Eigen::MatrixXd jac = f.jacobian(x);
    const imop::AlphaFit fit = imop::best_alpha(f, x);
    std::vector<double> row(x.data(), x.data() + n);
    row.insert(row.end(), v.data(), v.data() + k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) row.push_back(jac(i, j));
    row.insert(row.end(), fit.alpha.data(), fit.alpha.data() + k);
    row.push_back(fit.residual);
    imop::csv::write_row(os, row);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover multiobjective optimization problems from Pareto critical data"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_flag("--quiet,-q", globals.quiet, "Suppress summaries");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a data set (x, alpha) as CSV plus a JSON sidecar");
  generate->add_option("name", gen.name, "circle | ellipse | three-lines | saa-location | scalarize:<objective>")
      ->required();
  generate->add_option("--out,-o", gen.out, "Output CSV")->required();
  generate->add_option("--n-points", gen.n_points, "Points for circle/ellipse")->capture_default_str();
  generate->add_option("--a", gen.a, "Ellipse semi-axis along x1")->capture_default_str();
  generate->add_option("--b", gen.b, "Ellipse semi-axis along x2")->capture_default_str();
  generate->add_option("--per-segment", gen.per_segment, "Points per segment for three-lines")->capture_default_str();
  generate->add_option("--samples", gen.samples, "SAA sample count")->capture_default_str();
  generate->add_option("--scalarizations", gen.scalarizations, "SAA weight count")->capture_default_str();
  generate->add_flag("--shared-samples", gen.shared_samples, "One SAA sample set for all weights");
  generate->add_flag("--analytic", gen.analytic, "Use the exact expectation instead of samples");
  generate->add_option("--weights", gen.weights, "Weight count for scalarize")->capture_default_str();
  generate->add_option("--starts-per-axis", gen.starts_per_axis, "Start grid for scalarize")->capture_default_str();
  generate->add_option("--box", gen.box, "Box lo:hi,lo:hi for scalarize");
  generate->add_flag("--keep-all-minima", gen.keep_all, "Keep every distinct local minimizer");
  generate->add_option("--grad-tol", gen.grad_tol, "Descent gradient tolerance")->capture_default_str();
  generate->add_option("--max-iter", gen.max_iter, "Descent iteration limit")->capture_default_str();

  InferArgs inf;
  auto* infer = app.add_subcommand("infer", "Recover a polynomial objective vector from data");
  infer->add_option("data", inf.data, "Data CSV")->required()->check(CLI::ExistingFile);
  infer->add_option("--out,-o", inf.out, "Model JSON")->required();
  infer->add_option("--spectrum", inf.spectrum, "Spectrum CSV (default <out>.spectrum.csv)");
  infer->add_option("--n", inf.n, "Number of variables (default from sidecar)");
  infer->add_option("--k", inf.k, "Number of objectives (default from sidecar)");
  infer->add_option("--degree,-l", inf.degree, "Maximal monomial degree")->capture_default_str()->check(CLI::PositiveNumber);
  infer->add_option("--threshold", inf.threshold, "Threshold s-bar, or 'gap'")->capture_default_str();
  infer->add_option("--weights", inf.weights, "Comma-separated lambda over the selected vectors");
  infer->add_flag("--skip-degenerate", inf.skip_degenerate, "Skip singular vectors giving degenerate objectives");
  infer->add_flag("--no-normalize", inf.no_normalize, "Keep the unnormalized combination (exact null only)");
  infer->add_flag("--strict-overfitting", inf.strict, "Reject bases with k*d > n*N");
  infer->add_option("--atol", inf.atol, "Absolute zero tolerance")->capture_default_str();
  infer->add_option("--rtol", inf.rtol, "Relative zero tolerance")->capture_default_str();
  infer->add_option("--degeneracy-tol", inf.degeneracy_tol, "Variable dependence cutoff")->capture_default_str();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Smallest singular value per degree");
  sweep->add_option("data", sw.data, "Data CSV")->required()->check(CLI::ExistingFile);
  sweep->add_option("--degrees", sw.degrees, "Range lo..hi or list")->capture_default_str();
  sweep->add_option("--n", sw.n, "Number of variables (default from sidecar)");
  sweep->add_option("--k", sw.k, "Number of objectives (default from sidecar)");
  sweep->add_option("--out,-o", sw.out, "Output CSV (default stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Grid-scan a model's critical set and compare it to a reference");
  verify->add_option("model", ver.model, "Model JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--box", ver.box, "Box lo:hi,lo:hi")->required();
  verify->add_option("--resolution", ver.resolution, "Nodes per axis")->capture_default_str();
  verify->add_option("--tol", ver.tol, "Residual cutoff")->capture_default_str();
  verify->add_option("--link-radius", ver.link_radius, "Clustering radius (default 2x grid spacing)");
  verify->add_option("--filter-data", ver.filter_data, "Keep components near these data points");
  verify->add_option("--filter-radius", ver.filter_radius, "Distance to data for filtering")->capture_default_str();
  auto* ref_data = verify->add_option("--reference-data", ver.reference_data, "Reference points CSV (first n columns)");
  auto* ref_cloud = verify->add_option("--reference-cloud", ver.reference_cloud, "Reference cloud CSV");
  auto* ref_obj = verify->add_option("--reference-objective", ver.reference_objective, "Analytic objective to scan");
  ref_data->excludes(ref_cloud)->excludes(ref_obj);
  ref_cloud->excludes(ref_obj);
  verify->add_option("--reference-tol", ver.reference_tol, "Residual cutoff for the reference scan")
      ->capture_default_str();
  verify->add_option("--node-budget", ver.budget, "Maximal grid size")->capture_default_str();
  verify->add_option("--out,-o", ver.out, "Cloud CSV");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate-alpha", "Estimate KKT vectors from a Pareto front approximation");
  estimate->add_option("front", est.front, "Front CSV: k image columns, then n decision columns")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--k", est.k, "Number of objectives")->capture_default_str();
  estimate->add_option("--n", est.n, "Number of decision columns")->capture_default_str();
  estimate->add_option("--neighborhood", est.neighborhood, "Neighbours per fit (default 2(k-1)+1)");
  estimate->add_option("--out,-o", est.out, "Data CSV")->required();
  estimate->add_option("--rejects", est.rejects, "Flagged rows (default <out>.rejects.csv)");

  EvalArgs ev;
  auto* evaluate = app.add_subcommand("eval", "Values, Jacobians and best KKT vectors of a model");
  evaluate->add_option("model", ev.model, "Model JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--points", ev.points, "CSV of points (first n columns)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out,-o", ev.out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen, globals);
    if (infer->parsed()) return cmd_infer(inf, globals);
    if (sweep->parsed()) return cmd_sweep(sw, globals);
    if (verify->parsed()) return cmd_verify(ver, globals);
    if (estimate->parsed()) return cmd_estimate_alpha(est, globals);
    if (evaluate->parsed()) return cmd_eval(ev, globals);
  } catch (const std::exception& e) {
    std::cerr << "imop: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
