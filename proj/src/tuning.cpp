#include "gelato/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <limits>
#include <string>

#include "gelato/graph_select.hpp"
#include "gelato/lasso.hpp"
#include "gelato/simulate.hpp"

namespace gelato {

std::vector<double> default_multipliers() {
  return {0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
}

double universal_rate(Index p, Index n) {
  if (p < 2 || n < 1) throw Error(ErrorKind::invalid_argument, "rate needs p >= 2 and n >= 1");
  return std::sqrt(2.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double theoretical_lambda(Index p, Index n, double d0) { return d0 * universal_rate(p, n); }

double theoretical_tau(Index p, Index n, double d0, double d4) {
  return d4 * theoretical_lambda(p, n, d0);
}

namespace {

std::vector<double> normalized_multipliers(std::vector<double> m, const char* what) {
  if (m.empty()) m = default_multipliers();
  for (double v : m) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::config_error, std::string(what) + " multipliers must be positive");
    }
  }
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

std::size_t argmin_prefer_last(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] <= scores[best]) best = k;
  }
  return best;
}

void check_folds(Index n, int folds) {
  if (folds < 2 || folds > n) {
    throw Error(ErrorKind::config_error,
                "fold count must lie in [2, n]; got " + std::to_string(folds));
  }
}

struct FoldData {
  DataSet train;
  Matrix test;
};

FoldData split_fold(const DataSet& data, const std::vector<Index>& test_rows) {
  const Index n = data.n();
  std::vector<bool> is_test(static_cast<std::size_t>(n), false);
  for (Index r : test_rows) is_test[static_cast<std::size_t>(r)] = true;
  Matrix train(n - static_cast<Index>(test_rows.size()), data.p());
  Matrix test(static_cast<Index>(test_rows.size()), data.p());
  Index a = 0;
  for (Index r = 0; r < n; ++r) {
    if (!is_test[static_cast<std::size_t>(r)]) train.row(a++) = data.values().row(r);
  }
  for (std::size_t k = 0; k < test_rows.size(); ++k) test.row(static_cast<Index>(k)) = data.values().row(test_rows[k]);

  // Training statistics only; held-out rows reuse them.
  DataSet train_std = standardize(DataSet(std::move(train)));
  const Vector means = train_std.column_means();
  const Vector scales = train_std.column_scales();
  Matrix test_std = apply_standardization(test, means, scales);
  return FoldData{std::move(train_std), std::move(test_std)};
}

}  // namespace

TuningConfig make_grids(Index p, Index n, std::vector<double> lambda_multipliers,
                        std::vector<double> tau_multipliers, int folds, std::uint64_t seed) {
  if (p < 2 || n < 2) throw Error(ErrorKind::invalid_argument, "grids need p, n >= 2");
  TuningConfig c;
  c.lambda_multipliers = normalized_multipliers(std::move(lambda_multipliers), "lambda");
  c.tau_multipliers = normalized_multipliers(std::move(tau_multipliers), "tau");
  const double base = std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
  for (double a : c.lambda_multipliers) c.lambda_grid.push_back(a * base);
  for (double b : c.tau_multipliers) c.tau_grid.push_back(0.75 * b * base);
  c.folds = folds;
  c.seed = seed;
  return c;
}

std::vector<std::vector<Index>> fold_assignment(Index n, int folds, std::uint64_t seed) {
  check_folds(n, folds);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) order[static_cast<std::size_t>(r)] = r;
  Rng rng(seed);
  for (std::size_t k = order.size() - 1; k > 0; --k) {
    const auto swap_with = static_cast<std::size_t>(rng.below(k + 1));
    std::swap(order[k], order[swap_with]);
  }
  const Index base = n / folds;
  const Index extra = n % folds;
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  Index pos = 0;
  for (int f = 0; f < folds; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    out[static_cast<std::size_t>(f)].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return out;
}

double heldout_score(const Matrix& theta, const Matrix& s_out) {
  return gaussian_objective(theta, s_out);
}

CvResult cv_lambda(const DataSet& data, const TuningConfig& config, const LassoOptions& options,
                   unsigned threads) {
  const auto& grid = config.lambda_grid;
  if (grid.empty()) throw Error(ErrorKind::config_error, "lambda grid is empty");
  CvResult result;
  if (grid.size() == 1) {
    result.chosen = grid.front();
    result.scores = {0.0};
    return result;
  }
  const Index p = data.p();
  const auto folds = fold_assignment(data.n(), config.folds, config.seed);
  std::vector<double> scores(grid.size(), 0.0);
  for (const auto& test_rows : folds) {
    const FoldData fold = split_fold(data, test_rows);
    const Matrix gram = gram_matrix(fold.train.values());
    const double n_test = static_cast<double>(fold.test.rows());
    // Walk the grid from the largest lambda down, warm-starting each node.
    std::vector<Vector> warm(static_cast<std::size_t>(p), Vector::Zero(p - 1));
    for (std::size_t k = grid.size(); k-- > 0;) {
      const auto fits = nodewise_regressions_gram(gram, grid[k], options, threads, &warm);
      double total = 0.0;
      for (Index i = 0; i < p; ++i) {
        const Vector& beta = fits[static_cast<std::size_t>(i)].coefficients;
        warm[static_cast<std::size_t>(i)] = beta;
        Vector pred = Vector::Zero(fold.test.rows());
        for (Index slot = 0; slot < p - 1; ++slot) {
          if (beta(slot) != 0.0) pred += fold.test.col(predictor_variable(i, slot)) * beta(slot);
        }
        total += (fold.test.col(i) - pred).squaredNorm() / n_test;
      }
      scores[k] += total / static_cast<double>(folds.size());
    }
  }
  result.chosen_index = argmin_prefer_last(scores);
  result.chosen = grid[result.chosen_index];
  result.scores = std::move(scores);
  return result;
}

CvResult cv_tau(const DataSet& data, double lambda, const TuningConfig& config,
                const GelatoOptions& options) {
  const auto& grid = config.tau_grid;
  if (grid.empty()) throw Error(ErrorKind::config_error, "tau grid is empty");
  CvResult result;
  if (grid.size() == 1) {
    result.chosen = grid.front();
    result.scores = {0.0};
    return result;
  }
  const auto folds = fold_assignment(data.n(), config.folds, config.seed);
  std::vector<double> scores(grid.size(), 0.0);
  for (const auto& test_rows : folds) {
    const FoldData fold = split_fold(data, test_rows);
    const auto fits = nodewise_regressions(fold.train, lambda, options.lasso, options.threads);
    const SymMatrix gamma = sample_correlation(sample_covariance(fold.train));
    const Matrix s_out = fold.test.transpose() * fold.test / static_cast<double>(fold.test.rows());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!std::isfinite(scores[k])) continue;
      const EdgeSet edges = combine_edges(threshold_fits(fits, grid[k]), options.rule);
      try {
        const MleResult mle = fit_constrained_mle(gamma, edges, options.mle);
        scores[k] += heldout_score(mle.theta_hat.entries(), s_out) / static_cast<double>(folds.size());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::mle_nonexistence && e.kind() != ErrorKind::convergence_failure) {
          throw;
        }
        scores[k] = std::numeric_limits<double>::infinity();
      }
    }
  }
  if (std::none_of(scores.begin(), scores.end(), [](double s) { return std::isfinite(s); })) {
    throw Error(ErrorKind::tuning_failure, "no threshold candidate admits a maximum likelihood fit");
  }
  result.chosen_index = argmin_prefer_last(scores);
  result.chosen = grid[result.chosen_index];
  result.scores = std::move(scores);
  return result;
}

TuningChoice parse_tuning_choice(const std::string& text) {
  if (text == "cv") return TuningChoice::cv();
  auto parse_number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty() || !std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::config_error,
                  "expected a nonnegative number, 'cv' or 'rate:<number>', got '" + text + "'");
    }
    return v;
  };
  if (text.rfind("rate:", 0) == 0) return TuningChoice::rate(parse_number(text.substr(5)));
  if (text == "inf") return TuningChoice::fixed(std::numeric_limits<double>::infinity());
  return TuningChoice::fixed(parse_number(text));
}

std::string to_string(const TuningChoice& choice) {
  switch (choice.mode) {
    case TuningChoice::Mode::cv: return "cv";
    case TuningChoice::Mode::rate: {
      std::ostringstream out;
      out << "rate:" << std::setprecision(17) << choice.value;
      return out.str();
    }
    case TuningChoice::Mode::fixed: {
      std::ostringstream out;
      out << std::setprecision(17) << choice.value;
      return out.str();
    }
  }
  return "";
}

ResolvedTuning resolve_tuning(const DataSet& data, const TuningChoice& lambda_choice,
                              const TuningChoice& tau_choice, int folds, std::uint64_t seed,
                              const GelatoOptions& options) {
  ResolvedTuning out;
  const TuningConfig grids = make_grids(data.p(), data.n(), {}, {}, folds, seed);
  switch (lambda_choice.mode) {
    case TuningChoice::Mode::fixed: out.lambda = lambda_choice.value; break;
    case TuningChoice::Mode::rate:
      out.lambda = theoretical_lambda(data.p(), data.n(), lambda_choice.value);
      break;
    case TuningChoice::Mode::cv:
      out.lambda_cv = cv_lambda(data, grids, options.lasso, options.threads);
      out.lambda = out.lambda_cv->chosen;
      break;
  }
  switch (tau_choice.mode) {
    case TuningChoice::Mode::fixed: out.tau = tau_choice.value; break;
    case TuningChoice::Mode::rate: out.tau = tau_choice.value * out.lambda; break;
    case TuningChoice::Mode::cv:
      out.tau_cv = cv_tau(data, out.lambda, grids, options);
      out.tau = out.tau_cv->chosen;
      break;
  }
  return out;
}

}  // namespace gelato
