#include "gelato/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gelato {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::degenerate_column: return "degenerate_column";
    case ErrorKind::degenerate_variance: return "degenerate_variance";
    case ErrorKind::not_positive_definite: return "not_positive_definite";
    case ErrorKind::numeric_failure: return "numeric_failure";
    case ErrorKind::solver_failure: return "solver_failure";
    case ErrorKind::mle_nonexistence: return "mle_nonexistence";
    case ErrorKind::convergence_failure: return "convergence_failure";
    case ErrorKind::degenerate_draw: return "degenerate_draw";
    case ErrorKind::tuning_failure: return "tuning_failure";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::config_error: return "config_error";
  }
  return "unknown";
}

const char* to_string(MatrixRole role) {
  switch (role) {
    case MatrixRole::covariance: return "covariance";
    case MatrixRole::correlation: return "correlation";
    case MatrixRole::precision: return "precision";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(Matrix entries, MatrixRole role) : role_(role) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "symmetric matrix must be square");
  }
  if (!entries.allFinite()) {
    throw Error(ErrorKind::numeric_failure, "matrix has non-finite entries");
  }
  const double scale = entries.cwiseAbs().maxCoeff();
  const double skew = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  asymmetry_ = scale > 0.0 ? skew / scale : 0.0;
  if (asymmetry_ > kMaxAsymmetry) {
    throw Error(ErrorKind::invalid_argument,
                "matrix is not symmetric (relative asymmetry " + std::to_string(asymmetry_) + ")");
  }
  entries_ = 0.5 * (entries + entries.transpose());
  if (role_ == MatrixRole::correlation) {
    for (Index i = 0; i < entries_.rows(); ++i) {
      if (std::abs(entries_(i, i) - 1.0) > 1e-12) {
        throw Error(ErrorKind::invalid_argument, "correlation matrix needs a unit diagonal", i);
      }
    }
  }
}

SymMatrix SymMatrix::identity(Index p, MatrixRole role) {
  return SymMatrix(Matrix::Identity(p, p), role);
}

// ---------------------------------------------------------------------------
// DataSet

DataSet::DataSet(Matrix values)
    : DataSet(std::move(values), Vector(), Vector(), false) {}

DataSet::DataSet(Matrix values, Vector column_means, Vector column_scales, bool standardized)
    : values_(std::move(values)),
      means_(std::move(column_means)),
      scales_(std::move(column_scales)),
      standardized_(standardized) {
  if (values_.rows() < 2 || values_.cols() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "data set needs at least 2 observations and 2 variables");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "data set has non-finite values");
  }
  if (means_.size() == 0) means_ = Vector::Zero(values_.cols());
  if (scales_.size() == 0) scales_ = Vector::Ones(values_.cols());
  if (means_.size() != values_.cols() || scales_.size() != values_.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "column statistics do not match column count");
  }
}

DataSet standardize(const DataSet& data) {
  const Index n = data.n();
  const Index p = data.p();
  Matrix out(n, p);
  Vector means(p);
  Vector scales(p);
  for (Index j = 0; j < p; ++j) {
    const auto col = data.values().col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
      throw Error(ErrorKind::degenerate_column,
                  "column " + std::to_string(j) + " has zero variance", j);
    }
    out.col(j) = (col.array() - mean) / sd;
    means(j) = data.column_means()(j) + data.column_scales()(j) * mean;
    scales(j) = data.column_scales()(j) * sd;
  }
  return DataSet(std::move(out), std::move(means), std::move(scales), true);
}

Matrix apply_standardization(const Matrix& rows, const Vector& means, const Vector& scales) {
  if (rows.cols() != means.size() || rows.cols() != scales.size()) {
    throw Error(ErrorKind::dimension_mismatch, "standardization statistics do not match columns");
  }
  Matrix out = rows.rowwise() - means.transpose();
  return out.array().rowwise() / scales.transpose().array();
}

// ---------------------------------------------------------------------------
// EdgeSet

EdgeSet::EdgeSet(Index p) : p_(p), adjacency_(static_cast<std::size_t>(p * p), false) {
  if (p < 0) throw Error(ErrorKind::invalid_argument, "negative vertex count");
}

EdgeSet EdgeSet::complete(Index p) {
  EdgeSet e(p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) e.add(i, j);
  }
  return e;
}

EdgeSet EdgeSet::from_pairs(Index p, const std::vector<std::pair<Index, Index>>& pairs) {
  EdgeSet e(p);
  for (const auto& [i, j] : pairs) e.add(i, j);
  return e;
}

EdgeSet EdgeSet::support_of(const Matrix& m, double tol) {
  EdgeSet e(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > tol || std::abs(m(j, i)) > tol) e.add(i, j);
    }
  }
  return e;
}

void EdgeSet::check_vertex(Index i) const {
  if (i < 0 || i >= p_) {
    throw Error(ErrorKind::invalid_argument, "vertex " + std::to_string(i) + " out of range", i);
  }
}

bool EdgeSet::add(Index i, Index j) {
  check_vertex(i);
  check_vertex(j);
  if (i == j) throw Error(ErrorKind::invalid_argument, "self-loops are not allowed", i);
  if (i > j) std::swap(i, j);
  if (adjacency_[static_cast<std::size_t>(i * p_ + j)]) return false;
  adjacency_[static_cast<std::size_t>(i * p_ + j)] = true;
  adjacency_[static_cast<std::size_t>(j * p_ + i)] = true;
  const auto pair = std::make_pair(i, j);
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), pair), pair);
  return true;
}

bool EdgeSet::contains(Index i, Index j) const {
  check_vertex(i);
  check_vertex(j);
  return adjacency_[static_cast<std::size_t>(i * p_ + j)];
}

std::vector<Index> EdgeSet::neighbors(Index i) const {
  check_vertex(i);
  std::vector<Index> out;
  for (Index j = 0; j < p_; ++j) {
    if (adjacency_[static_cast<std::size_t>(i * p_ + j)]) out.push_back(j);
  }
  return out;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  if (other.p_ != p_) return false;
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const auto& e) { return other.contains(e.first, e.second); });
}

EdgeSet EdgeSet::minus(const EdgeSet& other) const {
  if (other.p_ != p_) throw Error(ErrorKind::dimension_mismatch, "edge sets over different vertex counts");
  EdgeSet out(p_);
  for (const auto& [i, j] : edges_) {
    if (!other.contains(i, j)) out.add(i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Moments and norms

SymMatrix sample_covariance(const Matrix& rows) {
  if (rows.rows() < 1) throw Error(ErrorKind::invalid_argument, "no observations");
  Matrix s = rows.transpose() * rows / static_cast<double>(rows.rows());
  return SymMatrix(std::move(s), MatrixRole::covariance);
}

SymMatrix sample_covariance(const DataSet& data) { return sample_covariance(data.values()); }

SymMatrix sample_correlation(const SymMatrix& covariance) {
  const Index p = covariance.dim();
  Vector inv_sd(p);
  for (Index i = 0; i < p; ++i) {
    const double d = covariance(i, i);
    if (!(d > 0.0)) {
      throw Error(ErrorKind::degenerate_variance,
                  "variable " + std::to_string(i) + " has nonpositive variance", i);
    }
    inv_sd(i) = 1.0 / std::sqrt(d);
  }
  Matrix g = inv_sd.asDiagonal() * covariance.entries() * inv_sd.asDiagonal();
  g.diagonal().setOnes();
  return SymMatrix(std::move(g), MatrixRole::correlation);
}

namespace {

// Block power iteration on m * m with Rayleigh-Ritz extraction. A block keeps
// convergence fast when the top eigenvalues of m * m nearly coincide.
double power_iteration_squared(const Matrix& m, Matrix v) {
  constexpr int kMaxIterations = 10000;
  constexpr double kRelTol = 1e-10;
  const Index p = v.rows();
  const Index k = v.cols();
  v = Eigen::HouseholderQR<Matrix>(v).householderQ() * Matrix::Identity(p, k);
  double previous = -1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Matrix w = m * (m * v);
    const Matrix h = v.transpose() * w;
    const double ritz = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .maxCoeff();
    if (w.norm() == 0.0) return 0.0;
    if (previous >= 0.0 && std::abs(ritz - previous) <= kRelTol * std::abs(ritz)) return ritz;
    previous = ritz;
    v = Eigen::HouseholderQR<Matrix>(w).householderQ() * Matrix::Identity(p, k);
  }
  throw Error(ErrorKind::numeric_failure, "power iteration did not converge", kMaxIterations);
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "operator norm needs a square matrix");
  const Index p = m.rows();
  if (p == 0) return 0.0;
  // Ones first, then a sign-alternating vector and fixed oscillating ones.
  const Index k = std::min<Index>(p, 8);
  Matrix start(p, k);
  for (Index i = 0; i < p; ++i) {
    start(i, 0) = 1.0;
    if (k > 1) start(i, 1) = (i % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(i + 1);
    for (Index c = 2; c < k; ++c) start(i, c) = std::cos(static_cast<double>((i + 1) * c) + 0.5 * c);
  }
  return std::sqrt(power_iteration_squared(m, start));
}

double operator_norm(const SymMatrix& m) { return operator_norm(m.entries()); }

double frobenius_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "matrices have different dimensions");
  }
  return (a - b).norm();
}

double frobenius_diff(const SymMatrix& a, const SymMatrix& b) {
  return frobenius_diff(a.entries(), b.entries());
}

// ---------------------------------------------------------------------------
// Cholesky

CholeskyFactor::CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {
  for (Index i = 0; i < lower_.rows(); ++i) {
    if (!(lower_(i, i) > 0.0)) {
      throw Error(ErrorKind::not_positive_definite, "Cholesky factor needs a positive diagonal", i);
    }
  }
}

double CholeskyFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  const Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

CholeskyFactor cholesky(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::dimension_mismatch, "Cholesky needs a square matrix");
  const Index p = m.rows();
  Matrix l = Matrix::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    double d = m(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw Error(ErrorKind::not_positive_definite,
                  "matrix is not positive definite (pivot " + std::to_string(j) + ")", j);
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < p; ++i) {
      double s = m(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

CholeskyFactor cholesky(const SymMatrix& m) { return cholesky(m.entries()); }

double log_det(const SymMatrix& m) { return cholesky(m).log_det(); }

Matrix inverse_spd(const Matrix& m) {
  const CholeskyFactor f = cholesky(m);
  Matrix inv = f.solve(Matrix::Identity(m.rows(), m.cols()));
  return 0.5 * (inv + inv.transpose());
}

SymMatrix inverse(const SymMatrix& m) {
  const MatrixRole role =
      m.role() == MatrixRole::precision ? MatrixRole::covariance : MatrixRole::precision;
  return SymMatrix(inverse_spd(m.entries()), role);
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric_failure, "symmetric eigensolver failed");
  }
  return solver.eigenvalues();
}

}  // namespace gelato
