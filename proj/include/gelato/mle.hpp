#pragma once

// Gaussian maximum likelihood for a precision matrix with a prescribed zero
// pattern (covariance selection):
//
//     minimize  tr(Theta * S) - log|Theta|
//     over      Theta > 0,  theta_ij = 0 for i != j, (i, j) not in E.
//
// At the optimum Sigma = Theta^{-1} matches S on the diagonal and on E.

#include "gelato/core.hpp"
#include "gelato/graph_select.hpp"
#include "gelato/lasso.hpp"

namespace gelato {

enum class FitScale { correlation, covariance };

const char* to_string(FitScale scale);

struct MleOptions {
  /// Target for the KKT gap returned by verify_kkt.
  double tolerance = 1e-7;
  long max_cycles = 10000;
  /// Entries of Theta beyond this multiple of max 1/S_ii signal that the
  /// likelihood is unbounded on the given graph.
  double divergence_bound = 1e10;
};

struct MleResult {
  SymMatrix theta_hat;
  SymMatrix sigma_hat;
  EdgeSet edge_set;
  FitScale scale;
  long iterations = 0;
  double max_kkt_violation = 0.0;
  double objective = 0.0;
  /// Clique size of a greedy (min-degree) chordal completion of the graph;
  /// an upper bound on the smallest n for which the MLE is guaranteed to exist.
  Index clique_bound = 1;
};

/// tr(theta * s) - log|theta|; throws not_positive_definite for indefinite theta.
double gaussian_objective(const Matrix& theta, const Matrix& s);

/// Solves the constrained problem on `input` (correlation or covariance role).
MleResult fit_constrained_mle(const SymMatrix& input, const EdgeSet& edges,
                              const MleOptions& options = {});

/// Largest of |Sigma_ij - input_ij| over E and the diagonal, and |Theta_ij|
/// over the off-diagonal pairs outside E.
double verify_kkt(const MleResult& result, const SymMatrix& input);
double verify_kkt(const Matrix& theta, const Matrix& sigma, const EdgeSet& edges,
                  const Matrix& input);

/// Upper bound on the maximal clique size of a minimal chordal cover, from
/// minimum-degree elimination.
Index greedy_clique_bound(const EdgeSet& edges);

struct GelatoOptions {
  FitScale scale = FitScale::correlation;
  EdgeRule rule = EdgeRule::or_rule;
  LassoOptions lasso;
  MleOptions mle;
  unsigned threads = 1;
};

struct GelatoEstimate {
  /// Fit on the chosen scale of the standardized data.
  MleResult mle;
  /// Precision and covariance estimates in the units of the raw data.
  SymMatrix theta_hat;
  SymMatrix sigma_hat;
  EdgeSet edges;
  double lambda = 0.0;
  double tau = 0.0;
};

/// Nodewise lasso, thresholding, then the constrained MLE. With the
/// correlation scale the fit uses the sample correlation matrix and is mapped
/// back with W = diag(column scales); with the covariance scale the fit uses
/// the sample covariance of the centered raw data directly.
GelatoEstimate gelato_estimate(const DataSet& data, double lambda, double tau,
                               const GelatoOptions& options = {});

/// Graph already chosen: refit on `data` only.
GelatoEstimate refit_on_graph(const DataSet& data, const EdgeSet& edges,
                              const GelatoOptions& options = {});

}  // namespace gelato
