#include "gelato/metrics.hpp"

#include <string>

namespace gelato {

namespace {

void require_pd(const SymMatrix& m, const char* what) {
  const double smallest = symmetric_eigenvalues(m.entries())(0);
  if (!(smallest >= kMinEigenvalue)) {
    throw Error(ErrorKind::not_positive_definite,
                std::string(what) + " is not safely positive definite (min eigenvalue " +
                    std::to_string(smallest) + ")");
  }
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "matrix dimensions differ");
}

}  // namespace

double risk(const SymMatrix& theta, const SymMatrix& sigma0) {
  require_same_dim(theta, sigma0);
  require_pd(theta, "theta");
  return theta.entries().cwiseProduct(sigma0.entries()).sum() - log_det(theta);
}

double kl_divergence(const SymMatrix& sigma0, const SymMatrix& sigma_hat) {
  require_same_dim(sigma0, sigma_hat);
  require_pd(sigma0, "sigma0");
  require_pd(sigma_hat, "sigma_hat");
  const CholeskyFactor f = cholesky(sigma_hat);
  // tr(sigma_hat^{-1} sigma0) - log|sigma_hat^{-1} sigma0| - p
  const double trace = f.solve(sigma0.entries()).trace();
  const double p = static_cast<double>(sigma0.dim());
  return 0.5 * (trace + f.log_det() - log_det(sigma0) - p);
}

ErrorReport error_report(const SymMatrix& theta_hat, const SymMatrix& sigma_hat,
                         const SymMatrix& theta0, const SymMatrix& sigma0) {
  require_same_dim(theta_hat, theta0);
  require_same_dim(sigma_hat, sigma0);
  ErrorReport r;
  r.frob_theta = frobenius_diff(theta_hat, theta0);
  r.frob_sigma = frobenius_diff(sigma_hat, sigma0);
  r.op_theta = operator_norm(Matrix(theta_hat.entries() - theta0.entries()));
  r.op_sigma = operator_norm(Matrix(sigma_hat.entries() - sigma0.entries()));
  r.kl = kl_divergence(sigma0, sigma_hat);
  r.risk_gap = risk(theta_hat, sigma0) - risk(theta0, sigma0);
  return r;
}

}  // namespace gelato
