#pragma once

// Cyclic coordinate descent for the lasso
//
//     minimize  (1/(2n)) ||y - X b||^2 + lambda ||b||_1
//
// working on the covariance form G = X^T X / n, c = X^T y / n, and the
// driver that regresses every variable on all the others.

#include <vector>

#include "gelato/core.hpp"

namespace gelato {

struct LassoOptions {
  /// Convergence when the largest coordinate change in a sweep falls below this.
  double tolerance = 1e-8;
  long max_sweeps = 100000;
};

struct RegressionFit {
  /// Response variable; -1 for a standalone fit.
  Index node = -1;
  /// One entry per predictor. For nodewise fits, entry k belongs to
  /// variable k < node ? k : k + 1.
  Vector coefficients;
  double lambda = 0.0;
  long iterations = 0;
  double objective = 0.0;
  /// Largest subgradient-condition violation at the returned solution.
  double kkt_violation = 0.0;
  /// Objective after each sweep; nonincreasing.
  std::vector<double> objective_trace;

  /// Coefficient on variable `j` of a nodewise fit (j != node).
  double coefficient_on(Index j) const;
};

/// Maps predictor slot k of node `node` to its variable index and back.
inline Index predictor_variable(Index node, Index slot) { return slot < node ? slot : slot + 1; }
inline Index predictor_slot(Index node, Index variable) { return variable < node ? variable : variable - 1; }

double soft_threshold(double z, double gamma);

/// Fits one lasso regression. `warm_start`, when given, seeds the descent.
RegressionFit fit_lasso(const Matrix& design, const Vector& response, double lambda,
                        const LassoOptions& options = {}, const Vector* warm_start = nullptr);

/// Same problem given G = X^T X / n, c = X^T y / n and y^T y / n.
RegressionFit fit_lasso_gram(const Matrix& gram, const Vector& cross, double response_ss,
                             double lambda, const LassoOptions& options = {},
                             const Vector* warm_start = nullptr);

/// Subgradient-condition violation of `beta` for the covariance-form problem.
double lasso_kkt_violation(const Matrix& gram, const Vector& cross, const Vector& beta,
                           double lambda);

/// Gram matrix X^T X / n of a data matrix.
Matrix gram_matrix(const Matrix& x);

/// Regresses each column on all other columns with the shared `lambda`.
/// Fits are independent; `threads` > 1 runs them concurrently with results
/// identical to the sequential run.
std::vector<RegressionFit> nodewise_regressions(const DataSet& data, double lambda,
                                                const LassoOptions& options = {},
                                                unsigned threads = 1);

/// Nodewise fits from a precomputed Gram matrix of standardized data.
std::vector<RegressionFit> nodewise_regressions_gram(const Matrix& gram, double lambda,
                                                     const LassoOptions& options = {},
                                                     unsigned threads = 1,
                                                     const std::vector<Vector>* warm_starts = nullptr);

}  // namespace gelato
