#pragma once

// Quantities from the analysis of the estimator that can be computed from a
// known precision matrix: essential sparsity, nodewise regression
// coefficients, sparse eigenvalues and the bias caused by a wrong graph.

#include <vector>

#include "gelato/core.hpp"

namespace gelato {

struct SparsityReport {
  /// s0^i for each row.
  std::vector<Index> per_node;
  /// S0,n = sum of per_node.
  Index total = 0;
  /// sqrt(2 log p / n).
  double lambda_used = 0.0;
  /// Number of nonzero off-diagonal entries per row.
  std::vector<Index> node_degrees;
  Index max_degree = 0;
};

/// Entries with |theta_ij| at or below this multiple of max theta_ii count as
/// zero when computing node degrees (inverted matrices carry round-off).
inline constexpr double kSupportTolerance = 1e-12;

/// For each row, the smallest integer s with
///   sum_{j != i} min(theta_ij^2, lambda^2 theta_ii) <= s lambda^2 theta_ii.
SparsityReport essential_sparsity(const SymMatrix& theta0, Index n);

struct RegressionForm {
  /// beta(i, j) = -theta_ij / theta_ii: coefficient on X_j when regressing X_i.
  Matrix beta;
  /// Var(V_i) = 1 / theta_ii.
  Vector residual_variances;
};

RegressionForm precision_to_regression(const SymMatrix& theta0);

struct SparseEigenvalues {
  double rho_min = 0.0;
  double rho_max = 0.0;
};

inline constexpr Index kMaxSparseEigenvalueOrder = 12;
/// Upper limit on the number of principal submatrices examined.
inline constexpr double kMaxSparseEigenvalueSubsets = 2e7;

/// Extremes of the m-sparse Rayleigh quotients of sigma0, by enumerating all
/// principal submatrices of size min(m, p).
SparseEigenvalues sparse_eigenvalues(const SymMatrix& sigma0, Index m);

/// ||theta_tilde - theta0||_F where theta_tilde keeps the diagonal of theta0
/// and its entries on e_hat ∩ true_edges.
double bias_norm(const SymMatrix& theta0, const EdgeSet& e_hat, const EdgeSet& true_edges);

}  // namespace gelato
