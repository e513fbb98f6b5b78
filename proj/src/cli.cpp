#include "gelato/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "gelato/diagnostics.hpp"
#include "gelato/experiment.hpp"
#include "gelato/io.hpp"
#include "gelato/mle.hpp"
#include "gelato/simulate.hpp"
#include "gelato/tuning.hpp"
#include "parallel.hpp"

namespace gelato {

namespace {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse_error:
    case ErrorKind::config_error:
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::degenerate_column:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

json error_json(const Error& e) {
  json err = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (e.index()) err["index"] = *e.index();
  if (e.value()) err["value"] = *e.value();
  return {{"schema_version", kSchemaVersion}, {"error", err}};
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::config_error, "cannot write '" + path + "'");
  file << text;
}

FitScale parse_scale(const std::string& s) {
  if (s == "corr" || s == "correlation") return FitScale::correlation;
  if (s == "cov" || s == "covariance") return FitScale::covariance;
  throw Error(ErrorKind::config_error, "scale must be 'corr' or 'cov'");
}

EdgeRule parse_rule(const std::string& s) {
  if (s == "or") return EdgeRule::or_rule;
  if (s == "and") return EdgeRule::and_rule;
  throw Error(ErrorKind::config_error, "rule must be 'or' or 'and'");
}

json cv_json(const std::optional<CvResult>& cv, const std::vector<double>& grid) {
  if (!cv) return nullptr;
  json scores = json::array();
  for (double s : cv->scores) scores.push_back(std::isfinite(s) ? json(s) : json(nullptr));
  return {{"grid", grid}, {"scores", scores}, {"chosen_index", cv->chosen_index}};
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string output;
  std::string lambda = "cv";
  std::string tau = "cv";
  std::string scale = "corr";
  std::string rule = "or";
  int folds = 10;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const CsvTable table = read_csv_file(a.input);
  const DataSet data = standardize(DataSet(table.values));
  GelatoOptions options;
  options.scale = parse_scale(a.scale);
  options.rule = parse_rule(a.rule);
  options.threads = a.threads;
  const TuningChoice lambda_choice = parse_tuning_choice(a.lambda);
  const TuningChoice tau_choice = parse_tuning_choice(a.tau);
  if ((lambda_choice.mode == TuningChoice::Mode::cv || tau_choice.mode == TuningChoice::Mode::cv) &&
      (a.folds < 2 || a.folds > data.n())) {
    throw Error(ErrorKind::config_error, "folds must lie in [2, n]");
  }

  json doc = {{"schema_version", kSchemaVersion}, {"command", "estimate"},
              {"n", data.n()},                    {"p", data.p()}};
  if (!table.header.empty()) doc["variables"] = table.header;
  try {
    const ResolvedTuning tuning = resolve_tuning(data, lambda_choice, tau_choice, a.folds, a.seed, options);
    const TuningConfig grids = make_grids(data.p(), data.n());
    doc["tuning"] = {{"lambda", {{"mode", to_string(lambda_choice)},
                                 {"value", tuning.lambda},
                                 {"cv", cv_json(tuning.lambda_cv, grids.lambda_grid)}}},
                     {"tau", {{"mode", to_string(tau_choice)},
                              {"value", std::isfinite(tuning.tau) ? json(tuning.tau) : json("inf")},
                              {"cv", cv_json(tuning.tau_cv, grids.tau_grid)}}},
                     {"folds", a.folds},
                     {"seed", a.seed}};
    const GelatoEstimate est = gelato_estimate(data, tuning.lambda, tuning.tau, options);
    doc["scale"] = to_string(options.scale);
    doc["rule"] = a.rule;
    doc["edges"] = edges_to_json(est.edges);
    doc["edge_count"] = est.edges.size();
    doc["theta_hat"] = matrix_to_json(est.theta_hat.entries());
    doc["sigma_hat"] = matrix_to_json(est.sigma_hat.entries());
    doc["kkt_violation"] = est.mle.max_kkt_violation;
    doc["iterations"] = est.mle.iterations;
    doc["clique_bound"] = est.mle.clique_bound;
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) != kExitNumeric) throw;
    json failure = error_json(e);
    failure["command"] = "estimate";
    emit(failure, a.output, out);
    return kExitNumeric;
  }
  emit(doc, a.output, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string family;
  Index p = 0;
  Index block_size = 0;
  double rho = 0.9;
  double pi = 0.1;
  double entry_value = 0.5;
  std::uint64_t model_seed = 0;
};

ModelSpec to_spec(const ModelArgs& m) {
  ModelSpec spec;
  spec.family = parse_model_family(m.family);
  spec.p = m.p;
  spec.block_size = m.block_size;
  spec.rho = m.rho;
  spec.pi = m.pi;
  spec.entry_value = m.entry_value;
  spec.seed = m.model_seed;
  validate(spec);
  return spec;
}

void add_model_options(CLI::App& app, ModelArgs& m) {
  app.add_option("--model", m.family, "ar1_block | random_precision | exp_decay");
  app.add_option("--p", m.p, "Dimension");
  app.add_option("--block-size", m.block_size, "AR(1) block size (default: one block)");
  app.add_option("--rho", m.rho, "AR(1) correlation");
  app.add_option("--pi", m.pi, "Edge probability of the random precision model");
  app.add_option("--entry-value", m.entry_value, "Nonzero off-diagonal value of B");
  app.add_option("--model-seed", m.model_seed, "Seed for the random precision draw");
}

struct SimulateArgs {
  std::string config_path;
  ModelArgs model;
  std::vector<Index> n_values;
  int replicates = 1;
  std::string lambda = "rate:2";
  std::string tau = "rate:1";
  std::string scale = "corr";
  int folds = 10;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output;
  std::string summary;
  bool timing = false;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App& app, std::ostream& out) {
  ExperimentConfig config;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw Error(ErrorKind::config_error, "cannot open '" + a.config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse_error, std::string("config: ") + e.what());
    }
    config = experiment_config_from_json(j);
  } else {
    if (a.model.family.empty()) throw Error(ErrorKind::config_error, "--model is required without --config");
    config.model = to_spec(a.model);
    config.n_values = a.n_values;
    config.replicates = a.replicates;
    config.lambda = parse_tuning_choice(a.lambda);
    config.tau = parse_tuning_choice(a.tau);
    config.folds = a.folds;
    config.scale = parse_scale(a.scale);
    config.seed = a.seed;
  }
  // Explicit flags override the config file.
  if (app.count("--output") > 0 || config.output_path.empty()) config.output_path = a.output;
  if (app.count("--seed") > 0) config.seed = a.seed;
  config.threads = a.threads;
  config.timing = a.timing;
  validate(config);

  const auto rows = run_experiment(config);
  std::ostringstream csv;
  write_rows_csv(csv, rows, config.timing);
  const json summary = summarize(rows, config);
  if (config.output_path.empty() || config.output_path == "-") {
    out << csv.str();
  } else {
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::config_error, "cannot write '" + config.output_path + "'");
    file << csv.str();
  }
  std::string summary_path = a.summary;
  if (summary_path.empty() && !config.output_path.empty() && config.output_path != "-") {
    summary_path = config.output_path + ".summary.json";
  }
  if (!summary_path.empty()) emit(summary, summary_path, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DiagnoseArgs {
  std::string input;
  ModelArgs model;
  Index n = 0;
  Index m = 0;
  std::string output;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  SymMatrix theta0 = SymMatrix::identity(2, MatrixRole::precision);
  json source;
  if (!a.input.empty()) {
    theta0 = SymMatrix(read_csv_file(a.input).values, MatrixRole::precision);
    source = {{"input", a.input}};
  } else if (!a.model.family.empty()) {
    const ModelSpec spec = to_spec(a.model);
    theta0 = generate_model(spec).theta0;
    source = {{"model", to_json(spec)}};
  } else {
    throw Error(ErrorKind::config_error, "diagnose needs --input or --model");
  }
  const SymMatrix sigma0 = inverse(theta0);  // throws for non-PD input
  const SparsityReport report = essential_sparsity(theta0, a.n);
  const Vector eig = symmetric_eigenvalues(sigma0.entries());
  json doc = {{"schema_version", kSchemaVersion},
              {"command", "diagnose"},
              {"source", source},
              {"n", a.n},
              {"p", theta0.dim()},
              {"sparsity", to_json(report)},
              {"sigma0_eigenvalues", {{"min", eig(0)}, {"max", eig(eig.size() - 1)}}}};
  if (a.m > 0) {
    const SparseEigenvalues se = sparse_eigenvalues(sigma0, a.m);
    doc["sparse_eigenvalues"] = {{"m", a.m}, {"rho_min", se.rho_min}, {"rho_max", se.rho_max}};
  }
  emit(doc, a.output, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse Gaussian graphical model estimation: nodewise lasso, thresholding and "
               "constrained maximum likelihood"};
  app.require_subcommand(1);
  const unsigned default_threads = detail::default_threads();

  EstimateArgs est;
  est.threads = default_threads;
  auto* estimate = app.add_subcommand("estimate", "Estimate the graph and precision matrix of a CSV data set");
  estimate->add_option("--input", est.input, "CSV file, one observation per row")->required();
  estimate->add_option("--output", est.output, "JSON output path (default: stdout)");
  estimate->add_option("--lambda", est.lambda, "number | cv | rate:<d0>")->capture_default_str();
  estimate->add_option("--tau", est.tau, "number | cv | rate:<D4>")->capture_default_str();
  estimate->add_option("--scale", est.scale, "corr | cov")->capture_default_str();
  estimate->add_option("--rule", est.rule, "or | and")->capture_default_str();
  estimate->add_option("--folds", est.folds, "Cross-validation folds")->capture_default_str();
  estimate->add_option("--seed", est.seed, "Seed for the fold split")->capture_default_str();
  estimate->add_option("--threads", est.threads, "Worker threads");

  SimulateArgs sim;
  sim.threads = default_threads;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment on a model family");
  simulate->add_option("--config", sim.config_path, "JSON experiment config");
  add_model_options(*simulate, sim.model);
  simulate->add_option("--n", sim.n_values, "Sample sizes, comma separated")->delimiter(',');
  simulate->add_option("--replicates", sim.replicates)->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "number | cv | rate:<d0>")->capture_default_str();
  simulate->add_option("--tau", sim.tau, "number | cv | rate:<D4>")->capture_default_str();
  simulate->add_option("--scale", sim.scale, "corr | cov")->capture_default_str();
  simulate->add_option("--folds", sim.folds)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads");
  simulate->add_option("--output", sim.output, "Per-replicate CSV path (default: stdout)");
  simulate->add_option("--summary", sim.summary, "Summary JSON path (default: <output>.summary.json)");
  simulate->add_flag("--timing", sim.timing, "Add a runtime_ms column");

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "Essential sparsity and eigenvalue diagnostics of a true model");
  diagnose->add_option("--input", diag.input, "CSV file holding the precision matrix");
  add_model_options(*diagnose, diag.model);
  diagnose->add_option("--n", diag.n, "Sample size")->required();
  diagnose->add_option("--m", diag.m, "Also report m-sparse eigenvalues (m <= 12)");
  diagnose->add_option("--output", diag.output, "JSON output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est, out);
    if (simulate->parsed()) return cmd_simulate(sim, *simulate, out);
    if (diagnose->parsed()) return cmd_diagnose(diag, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace gelato
