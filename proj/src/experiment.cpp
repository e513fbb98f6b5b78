#include "gelato/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "gelato/io.hpp"
#include "gelato/metrics.hpp"
#include "parallel.hpp"

namespace gelato {

void validate(const ExperimentConfig& config) {
  validate(config.model);
  if (config.n_values.empty()) throw Error(ErrorKind::config_error, "at least one sample size is required");
  for (Index n : config.n_values) {
    if (n < 2) throw Error(ErrorKind::config_error, "sample sizes must be at least 2");
  }
  if (config.replicates < 1) throw Error(ErrorKind::config_error, "replicates must be at least 1");
  if (config.folds < 2) throw Error(ErrorKind::config_error, "folds must be at least 2");
}

nlohmann::json to_json(const ExperimentConfig& config) {
  return {{"model", to_json(config.model)},
          {"n_values", config.n_values},
          {"replicates", config.replicates},
          {"lambda", to_string(config.lambda)},
          {"tau", to_string(config.tau)},
          {"folds", config.folds},
          {"scale", to_string(config.scale)},
          {"seed", config.seed}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.model = model_spec_from_json(j.at("model"));
    c.n_values = j.at("n_values").get<std::vector<Index>>();
    c.replicates = j.value("replicates", 1);
    c.lambda = parse_tuning_choice(j.value("lambda", std::string("rate:2")));
    c.tau = parse_tuning_choice(j.value("tau", std::string("rate:1")));
    c.folds = j.value("folds", 10);
    const std::string scale = j.value("scale", std::string("correlation"));
    if (scale == "correlation" || scale == "corr") {
      c.scale = FitScale::correlation;
    } else if (scale == "covariance" || scale == "cov") {
      c.scale = FitScale::covariance;
    } else {
      throw Error(ErrorKind::config_error, "unknown scale '" + scale + "'");
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_path = j.value("output", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config_error, std::string("experiment config: ") + e.what());
  }
  validate(c);
  return c;
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t n_index, int replicate) {
  return derive_seed(derive_seed(master, n_index), static_cast<std::uint64_t>(replicate));
}

std::vector<ReplicateRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const TrueModel truth = generate_model(config.model);
  const std::size_t reps = static_cast<std::size_t>(config.replicates);
  std::vector<ReplicateRow> rows(config.n_values.size() * reps);

  detail::parallel_for(rows.size(), std::max(1u, config.threads), [&](std::size_t k) {
    const std::size_t n_index = k / reps;
    const int r = static_cast<int>(k % reps);
    ReplicateRow& row = rows[k];
    row.replicate = r;
    row.n = config.n_values[n_index];
    row.family = config.model.family;
    row.seed = replicate_seed(config.seed, n_index, r);
    const auto start = std::chrono::steady_clock::now();
    try {
      const DataSet data = sample_gaussian(truth.sigma0, row.n, row.seed);
      GelatoOptions options;
      options.scale = config.scale;
      const ResolvedTuning tuning =
          resolve_tuning(data, config.lambda, config.tau, config.folds, derive_seed(row.seed, 1), options);
      row.lambda = tuning.lambda;
      row.tau = tuning.tau;
      const GelatoEstimate est = gelato_estimate(data, tuning.lambda, tuning.tau, options);
      const ErrorReport report = error_report(est.theta_hat, est.sigma_hat, truth.theta0, truth.sigma0);
      row.frob_theta = report.frob_theta;
      row.frob_sigma = report.frob_sigma;
      row.kl = report.kl;
      row.risk_gap = report.risk_gap;
      row.edges = est.edges.size();
      row.false_edges = est.edges.minus(truth.edges).size();
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.frob_theta = row.frob_sigma = row.kl = row.risk_gap = nan;
      row.error = to_string(e.kind());
    }
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

void write_rows_csv(std::ostream& out, const std::vector<ReplicateRow>& rows, bool timing) {
  out << "replicate,seed,n,family,lambda,tau,frob_theta,frob_sigma,kl,risk_gap,edges,false_edges";
  if (timing) out << ",runtime_ms";
  out << ",error\n";
  for (const auto& row : rows) {
    out << row.replicate << ',' << row.seed << ',' << row.n << ',' << to_string(row.family) << ','
        << format_double(row.lambda) << ',' << format_double(row.tau) << ','
        << format_double(row.frob_theta) << ',' << format_double(row.frob_sigma) << ','
        << format_double(row.kl) << ',' << format_double(row.risk_gap) << ',' << row.edges << ','
        << row.false_edges;
    if (timing) out << ',' << format_double(row.runtime_ms);
    out << ',' << row.error << '\n';
  }
}

Quartiles quartiles(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }),
               values.end());
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

namespace {

nlohmann::json quartile_json(const Quartiles& q) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"q1", num(q.q1)}, {"median", num(q.median)}, {"q3", num(q.q3)}};
}

}  // namespace

nlohmann::json summarize(const std::vector<ReplicateRow>& rows, const ExperimentConfig& config) {
  nlohmann::json groups = nlohmann::json::array();
  for (Index n : config.n_values) {
    std::vector<double> ft, fs, kl, edges, false_edges;
    int failures = 0;
    int count = 0;
    for (const auto& row : rows) {
      if (row.n != n) continue;
      ++count;
      if (!row.error.empty()) {
        ++failures;
        continue;
      }
      ft.push_back(row.frob_theta);
      fs.push_back(row.frob_sigma);
      kl.push_back(row.kl);
      edges.push_back(static_cast<double>(row.edges));
      false_edges.push_back(static_cast<double>(row.false_edges));
    }
    groups.push_back({{"family", to_string(config.model.family)},
                      {"n", n},
                      {"replicates", count},
                      {"failures", failures},
                      {"frob_theta", quartile_json(quartiles(ft))},
                      {"frob_sigma", quartile_json(quartiles(fs))},
                      {"kl", quartile_json(quartiles(kl))},
                      {"edges", quartile_json(quartiles(edges))},
                      {"false_edges", quartile_json(quartiles(false_edges))}});
  }
  return {{"schema_version", kSchemaVersion}, {"config", to_json(config)}, {"groups", groups}};
}

}  // namespace gelato
