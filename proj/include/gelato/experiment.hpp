#pragma once

// Batch simulation: draw replicate data sets from a model, estimate, and
// score against the truth.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gelato/mle.hpp"
#include "gelato/simulate.hpp"
#include "gelato/tuning.hpp"

namespace gelato {

struct ExperimentConfig {
  ModelSpec model;
  std::vector<Index> n_values;
  int replicates = 1;
  TuningChoice lambda = TuningChoice::rate(2.0);
  TuningChoice tau = TuningChoice::rate(1.0);
  int folds = 10;
  FitScale scale = FitScale::correlation;
  std::uint64_t seed = 0;
  std::string output_path;
  unsigned threads = 1;
  /// Adds a wall-clock column; rows are then no longer reproducible.
  bool timing = false;
};

void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  Index n = 0;
  ModelFamily family = ModelFamily::ar1_block;
  double lambda = 0.0;
  double tau = 0.0;
  double frob_theta = 0.0;
  double frob_sigma = 0.0;
  double kl = 0.0;
  double risk_gap = 0.0;
  std::size_t edges = 0;
  std::size_t false_edges = 0;
  double runtime_ms = 0.0;
  /// Error kind when the replicate failed; metric fields are then NaN.
  std::string error;
};

/// Seed of the data set for replicate `r` at the `n_index`-th sample size.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t n_index, int replicate);

/// Runs every (n, replicate) pair; rows come back ordered by n then replicate
/// regardless of the thread count.
std::vector<ReplicateRow> run_experiment(const ExperimentConfig& config);

void write_rows_csv(std::ostream& out, const std::vector<ReplicateRow>& rows, bool timing);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quartiles of the finite values; NaNs when none.
Quartiles quartiles(std::vector<double> values);

/// Medians and quartiles per (family, n).
nlohmann::json summarize(const std::vector<ReplicateRow>& rows, const ExperimentConfig& config);

}  // namespace gelato
