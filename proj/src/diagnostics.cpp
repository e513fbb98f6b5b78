#include "gelato/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gelato {

SparsityReport essential_sparsity(const SymMatrix& theta0, Index n) {
  const Index p = theta0.dim();
  if (p < 2 || n < 1) throw Error(ErrorKind::invalid_argument, "essential sparsity needs p >= 2, n >= 1");
  const Matrix& t = theta0.entries();
  for (Index i = 0; i < p; ++i) {
    if (!(t(i, i) > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "precision matrix needs a positive diagonal", i);
    }
  }
  SparsityReport report;
  report.lambda_used = std::sqrt(2.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
  const double lambda2 = report.lambda_used * report.lambda_used;
  const double support_tol = kSupportTolerance * t.diagonal().maxCoeff();
  for (Index i = 0; i < p; ++i) {
    const double cap = lambda2 * t(i, i);
    double sum = 0.0;
    Index degree = 0;
    for (Index j = 0; j < p; ++j) {
      if (j == i) continue;
      sum += std::min(t(i, j) * t(i, j), cap);
      if (std::abs(t(i, j)) > support_tol) ++degree;
    }
    // A sum of k capped terms can exceed k * cap by round-off.
    const double slack = 1.0 + 4.0 * static_cast<double>(p) * std::numeric_limits<double>::epsilon();
    Index s = 0;
    while (s < p - 1 && sum > static_cast<double>(s) * cap * slack) ++s;
    report.per_node.push_back(s);
    report.node_degrees.push_back(degree);
    report.total += s;
    report.max_degree = std::max(report.max_degree, degree);
  }
  return report;
}

RegressionForm precision_to_regression(const SymMatrix& theta0) {
  const Index p = theta0.dim();
  const Matrix& t = theta0.entries();
  RegressionForm out{Matrix::Zero(p, p), Vector(p)};
  for (Index i = 0; i < p; ++i) {
    if (!(t(i, i) > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "precision matrix needs a positive diagonal", i);
    }
    out.residual_variances(i) = 1.0 / t(i, i);
    for (Index j = 0; j < p; ++j) {
      if (j != i) out.beta(i, j) = -t(i, j) / t(i, i);
    }
  }
  return out;
}

namespace {

double binomial(Index p, Index m) {
  double c = 1.0;
  for (Index k = 1; k <= m; ++k) c = c * static_cast<double>(p - m + k) / static_cast<double>(k);
  return c;
}

}  // namespace

SparseEigenvalues sparse_eigenvalues(const SymMatrix& sigma0, Index m) {
  const Index p = sigma0.dim();
  if (m < 1) throw Error(ErrorKind::invalid_argument, "sparsity order must be at least 1");
  if (m > kMaxSparseEigenvalueOrder) {
    throw Error(ErrorKind::invalid_argument,
                "sparse eigenvalues are computed by exhaustive enumeration; order " +
                    std::to_string(m) + " exceeds the cap of " +
                    std::to_string(kMaxSparseEigenvalueOrder));
  }
  // Eigenvalues of a principal submatrix interlace those of any larger one
  // containing it, so supports of size exactly min(m, p) attain the extremes.
  const Index k = std::min(m, p);
  if (binomial(p, k) > kMaxSparseEigenvalueSubsets) {
    throw Error(ErrorKind::invalid_argument,
                "too many supports to enumerate (C(" + std::to_string(p) + ", " +
                    std::to_string(k) + "))");
  }
  const Matrix& s = sigma0.entries();
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index a = 0; a < k; ++a) idx[static_cast<std::size_t>(a)] = a;
  SparseEigenvalues out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Matrix sub(k, k);
  while (true) {
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) sub(a, b) = s(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
    const Vector eig = symmetric_eigenvalues(sub);
    out.rho_min = std::min(out.rho_min, eig(0));
    out.rho_max = std::max(out.rho_max, eig(k - 1));
    // Next k-combination in lexicographic order.
    Index pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == p - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index a = pos + 1; a < k; ++a) idx[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a - 1)] + 1;
  }
  return out;
}

double bias_norm(const SymMatrix& theta0, const EdgeSet& e_hat, const EdgeSet& true_edges) {
  const Index p = theta0.dim();
  if (e_hat.p() != p || true_edges.p() != p) {
    throw Error(ErrorKind::dimension_mismatch, "edge sets and precision matrix dimension differ");
  }
  Matrix tilde = theta0.entries().diagonal().asDiagonal();
  for (const auto& [i, j] : true_edges.edges()) {
    if (e_hat.contains(i, j)) {
      tilde(i, j) = theta0(i, j);
      tilde(j, i) = theta0(j, i);
    }
  }
  return frobenius_diff(tilde, theta0.entries());
}

}  // namespace gelato
