#pragma once

// Dense matrix and dataset types shared by every stage of the estimator.

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

#include "gelato/error.hpp"

namespace gelato {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class MatrixRole { covariance, correlation, precision };

const char* to_string(MatrixRole role);

/// Symmetric p x p matrix tagged with what it represents.
///
/// The constructor symmetrizes its input as (M + M^T) / 2 and rejects inputs
/// whose relative asymmetry exceeds `kMaxAsymmetry`. Correlation matrices
/// must carry a unit diagonal.
class SymMatrix {
 public:
  static constexpr double kMaxAsymmetry = 1e-8;

  SymMatrix(Matrix entries, MatrixRole role);

  static SymMatrix identity(Index p, MatrixRole role);

  const Matrix& entries() const noexcept { return entries_; }
  MatrixRole role() const noexcept { return role_; }
  Index dim() const noexcept { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  /// Relative asymmetry max|M - M^T| / max|M| measured before symmetrizing.
  double asymmetry() const noexcept { return asymmetry_; }

  SymMatrix with_role(MatrixRole role) const { return SymMatrix(entries_, role); }

 private:
  Matrix entries_;
  MatrixRole role_;
  double asymmetry_ = 0.0;
};

/// n x p observation matrix (rows are observations).
///
/// `column_means` and `column_scales` record the affine map back to the raw
/// data: raw = values * scale + mean. For unstandardized data the means are
/// zero and the scales one.
class DataSet {
 public:
  explicit DataSet(Matrix values);
  DataSet(Matrix values, Vector column_means, Vector column_scales, bool standardized);

  const Matrix& values() const noexcept { return values_; }
  Index n() const noexcept { return values_.rows(); }
  Index p() const noexcept { return values_.cols(); }
  bool standardized() const noexcept { return standardized_; }
  const Vector& column_means() const noexcept { return means_; }
  const Vector& column_scales() const noexcept { return scales_; }

 private:
  Matrix values_;
  Vector means_;
  Vector scales_;
  bool standardized_ = false;
};

/// Undirected simple graph on p vertices. Pairs are stored once as (i, j)
/// with i < j, kept sorted.
class EdgeSet {
 public:
  explicit EdgeSet(Index p = 0);

  static EdgeSet complete(Index p);
  static EdgeSet from_pairs(Index p, const std::vector<std::pair<Index, Index>>& pairs);
  /// Off-diagonal support of `m`: edge (i, j) iff |m(i, j)| > tol.
  static EdgeSet support_of(const Matrix& m, double tol = 0.0);

  /// Returns false when the edge was already present. Self-loops throw.
  bool add(Index i, Index j);
  bool contains(Index i, Index j) const;

  Index p() const noexcept { return p_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  const std::vector<std::pair<Index, Index>>& edges() const noexcept { return edges_; }
  std::vector<Index> neighbors(Index i) const;

  bool is_subset_of(const EdgeSet& other) const;
  /// Edges of *this that are not in `other`.
  EdgeSet minus(const EdgeSet& other) const;

  friend bool operator==(const EdgeSet& a, const EdgeSet& b) {
    return a.p_ == b.p_ && a.edges_ == b.edges_;
  }

 private:
  void check_vertex(Index i) const;

  Index p_;
  std::vector<std::pair<Index, Index>> edges_;
  std::vector<bool> adjacency_;
};

/// Lower-triangular L with positive diagonal such that m = L L^T.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Matrix lower);

  const Matrix& lower() const noexcept { return lower_; }
  Index dim() const noexcept { return lower_.rows(); }
  Matrix reconstruct() const { return lower_ * lower_.transpose(); }
  double log_det() const;
  /// Solves m x = b using the two triangular systems.
  Matrix solve(const Matrix& b) const;

 private:
  Matrix lower_;
};

/// Centers each column and scales it to unit standard deviation (divisor n).
/// Throws degenerate_column naming the first zero-variance column.
DataSet standardize(const DataSet& data);

/// Applies previously fitted column statistics to new rows.
Matrix apply_standardization(const Matrix& rows, const Vector& means, const Vector& scales);

/// (1/n) X^T X without centering; callers pass mean-zero data.
SymMatrix sample_covariance(const DataSet& data);
SymMatrix sample_covariance(const Matrix& rows);

/// diag(S)^{-1/2} S diag(S)^{-1/2} with an exact unit diagonal.
SymMatrix sample_correlation(const SymMatrix& covariance);

/// Largest absolute eigenvalue via power iteration on m * m.
double operator_norm(const Matrix& m);
double operator_norm(const SymMatrix& m);

double frobenius_diff(const SymMatrix& a, const SymMatrix& b);
double frobenius_diff(const Matrix& a, const Matrix& b);

CholeskyFactor cholesky(const Matrix& m);
CholeskyFactor cholesky(const SymMatrix& m);
double log_det(const SymMatrix& m);
/// Inverse of a positive definite matrix. Covariance and correlation
/// inputs yield a precision matrix and vice versa.
SymMatrix inverse(const SymMatrix& m);
Matrix inverse_spd(const Matrix& m);

/// Symmetric eigenvalues in ascending order.
Vector symmetric_eigenvalues(const Matrix& m);

}  // namespace gelato
