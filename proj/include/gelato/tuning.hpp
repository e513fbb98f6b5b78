#pragma once

// Sequential cross-validation of (lambda, tau): lambda by the summed held-out
// squared error of the nodewise regressions, then tau by the held-out
// Gaussian negative log-likelihood of the refitted estimate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gelato/core.hpp"
#include "gelato/mle.hpp"

namespace gelato {

/// Multipliers A_k and B_k used for both grids by default.
std::vector<double> default_multipliers();

struct TheoreticalRate {
  double d0 = 2.0;
  double d4 = 1.0;
};

struct TuningConfig {
  std::vector<double> lambda_multipliers;
  std::vector<double> tau_multipliers;
  /// lambda_k = A_k sqrt(log p / n), ascending.
  std::vector<double> lambda_grid;
  /// tau_k = 0.75 B_k sqrt(log p / n), ascending.
  std::vector<double> tau_grid;
  int folds = 10;
  std::uint64_t seed = 0;
  std::optional<TheoreticalRate> theoretical;
};

/// Builds both grids; empty multiplier lists mean the defaults.
TuningConfig make_grids(Index p, Index n, std::vector<double> lambda_multipliers = {},
                        std::vector<double> tau_multipliers = {}, int folds = 10,
                        std::uint64_t seed = 0);

/// sqrt(2 log p / n).
double universal_rate(Index p, Index n);
/// lambda_n = d0 * sqrt(2 log p / n).
double theoretical_lambda(Index p, Index n, double d0);
/// t0 = D4 * d0 * sqrt(2 log p / n).
double theoretical_tau(Index p, Index n, double d0, double d4);

/// Row indices of each fold: a seeded permutation cut into contiguous blocks,
/// with the remainder spread over the first folds.
std::vector<std::vector<Index>> fold_assignment(Index n, int folds, std::uint64_t seed);

struct CvResult {
  double chosen = 0.0;
  std::size_t chosen_index = 0;
  /// One score per grid value (same order as the grid); +inf marks infeasible.
  std::vector<double> scores;
};

/// tr(theta * s_out) - log|theta|.
double heldout_score(const Matrix& theta, const Matrix& s_out);

CvResult cv_lambda(const DataSet& data, const TuningConfig& config,
                   const LassoOptions& options = {}, unsigned threads = 1);

CvResult cv_tau(const DataSet& data, double lambda, const TuningConfig& config,
                const GelatoOptions& options = {});

/// How one tuning parameter is obtained: a given value, cross-validation, or
/// the theoretical rate. For lambda the rate value is d0; for tau it is D4 and
/// the threshold becomes D4 * lambda_n.
struct TuningChoice {
  enum class Mode { fixed, cv, rate };
  Mode mode = Mode::rate;
  double value = 0.0;

  static TuningChoice fixed(double v) { return {Mode::fixed, v}; }
  static TuningChoice cv() { return {Mode::cv, 0.0}; }
  static TuningChoice rate(double v) { return {Mode::rate, v}; }
};

/// Parses "<number>", "cv" or "rate:<number>".
TuningChoice parse_tuning_choice(const std::string& text);
std::string to_string(const TuningChoice& choice);

struct ResolvedTuning {
  double lambda = 0.0;
  double tau = 0.0;
  std::optional<CvResult> lambda_cv;
  std::optional<CvResult> tau_cv;
};

/// Applies both choices to `data`; cross-validation uses the default grids
/// with `folds` folds and `seed` for the fold split.
ResolvedTuning resolve_tuning(const DataSet& data, const TuningChoice& lambda_choice,
                              const TuningChoice& tau_choice, int folds, std::uint64_t seed,
                              const GelatoOptions& options = {});

}  // namespace gelato
