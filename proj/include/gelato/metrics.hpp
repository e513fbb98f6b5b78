#pragma once

#include "gelato/core.hpp"

namespace gelato {

/// Smallest eigenvalue accepted as positive definite by the metrics.
inline constexpr double kMinEigenvalue = 1e-10;

/// R(theta) = tr(theta * sigma0) - log|theta|.
double risk(const SymMatrix& theta, const SymMatrix& sigma0);

/// KL divergence from N(0, sigma0) to N(0, sigma_hat).
double kl_divergence(const SymMatrix& sigma0, const SymMatrix& sigma_hat);

struct ErrorReport {
  double frob_theta = 0.0;
  double frob_sigma = 0.0;
  double op_theta = 0.0;
  double op_sigma = 0.0;
  double kl = 0.0;
  /// R(theta_hat) - R(theta0); equals 2 * kl.
  double risk_gap = 0.0;
};

ErrorReport error_report(const SymMatrix& theta_hat, const SymMatrix& sigma_hat,
                         const SymMatrix& theta0, const SymMatrix& sigma0);

}  // namespace gelato
