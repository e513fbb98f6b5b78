#include "gelato/lasso.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"

namespace gelato {

double RegressionFit::coefficient_on(Index j) const {
  if (node < 0) return coefficients(j);
  if (j == node) throw Error(ErrorKind::invalid_argument, "a node has no coefficient on itself", j);
  return coefficients(predictor_slot(node, j));
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

Matrix gram_matrix(const Matrix& x) {
  Matrix g = x.transpose() * x / static_cast<double>(x.rows());
  return 0.5 * (g + g.transpose());
}

double lasso_kkt_violation(const Matrix& gram, const Vector& cross, const Vector& beta,
                           double lambda) {
  const Vector g = cross - gram * beta;
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    double v;
    if (beta(j) != 0.0) {
      v = std::abs(g(j) - lambda * (beta(j) > 0.0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(g(j)) - lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

class CoordinateDescent {
 public:
  CoordinateDescent(const Matrix& gram, const Vector& cross, double response_ss, double lambda)
      : gram_(gram), cross_(cross), response_ss_(response_ss), lambda_(lambda) {}

  void start(const Vector& beta) {
    beta_ = beta;
    residual_corr_ = cross_ - gram_ * beta_;
  }

  // One pass over the coordinates; returns the largest absolute change.
  double sweep(bool active_only) {
    double largest = 0.0;
    for (Index j = 0; j < beta_.size(); ++j) {
      if (active_only && beta_(j) == 0.0) continue;
      const double gjj = gram_(j, j);
      if (gjj <= 0.0) continue;
      const double old = beta_(j);
      const double z = residual_corr_(j) + gjj * old;
      const double updated = soft_threshold(z, lambda_) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        beta_(j) = updated;
        residual_corr_ -= gram_.col(j) * delta;
        largest = std::max(largest, std::abs(delta));
      }
    }
    return largest;
  }

  double objective() const {
    // 0.5 y'y/n - c'b + 0.5 b'Gb, with Gb = c - r.
    return 0.5 * response_ss_ - 0.5 * cross_.dot(beta_) - 0.5 * residual_corr_.dot(beta_) +
           lambda_ * beta_.lpNorm<1>();
  }

  const Vector& beta() const { return beta_; }

 private:
  const Matrix& gram_;
  const Vector& cross_;
  double response_ss_;
  double lambda_;
  Vector beta_;
  Vector residual_corr_;
};

}  // namespace

RegressionFit fit_lasso_gram(const Matrix& gram, const Vector& cross, double response_ss,
                             double lambda, const LassoOptions& options,
                             const Vector* warm_start) {
  const Index q = cross.size();
  if (gram.rows() != q || gram.cols() != q) {
    throw Error(ErrorKind::dimension_mismatch, "Gram matrix does not match predictor count");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::invalid_argument, "lambda must be finite and nonnegative");
  }
  if (warm_start != nullptr && warm_start->size() != q) {
    throw Error(ErrorKind::dimension_mismatch, "warm start has the wrong length");
  }

  CoordinateDescent cd(gram, cross, response_ss, lambda);
  cd.start(warm_start != nullptr ? *warm_start : Vector::Zero(q));

  RegressionFit fit;
  fit.lambda = lambda;
  long sweeps = 0;
  auto run = [&](bool active_only) {
    const double change = cd.sweep(active_only);
    ++sweeps;
    fit.objective_trace.push_back(cd.objective());
    if (sweeps >= options.max_sweeps && change >= options.tolerance) {
      const double gap = lasso_kkt_violation(gram, cross, cd.beta(), lambda);
      throw Error(ErrorKind::solver_failure,
                  "lasso did not converge within " + std::to_string(options.max_sweeps) +
                      " sweeps (KKT violation " + std::to_string(gap) + ")",
                  std::nullopt, gap);
    }
    return change;
  };

  // Full sweep, then iterate on the active set until it settles; stop once
  // a full sweep confirms convergence.
  while (run(false) >= options.tolerance) {
    while (run(true) >= options.tolerance) {
    }
  }

  fit.coefficients = cd.beta();
  fit.iterations = sweeps;
  fit.objective = fit.objective_trace.back();
  fit.kkt_violation = lasso_kkt_violation(gram, cross, fit.coefficients, lambda);
  return fit;
}

RegressionFit fit_lasso(const Matrix& design, const Vector& response, double lambda,
                        const LassoOptions& options, const Vector* warm_start) {
  if (design.rows() != response.size()) {
    throw Error(ErrorKind::dimension_mismatch, "design rows and response length differ");
  }
  if (design.rows() == 0) throw Error(ErrorKind::invalid_argument, "no observations");
  const double n = static_cast<double>(design.rows());
  const Matrix gram = gram_matrix(design);
  const Vector cross = design.transpose() * response / n;
  const double response_ss = response.squaredNorm() / n;
  return fit_lasso_gram(gram, cross, response_ss, lambda, options, warm_start);
}

std::vector<RegressionFit> nodewise_regressions_gram(const Matrix& gram, double lambda,
                                                     const LassoOptions& options,
                                                     unsigned threads,
                                                     const std::vector<Vector>* warm_starts) {
  const Index p = gram.rows();
  if (p < 2 || gram.cols() != p) {
    throw Error(ErrorKind::dimension_mismatch, "nodewise regressions need a square Gram matrix, p >= 2");
  }
  if (warm_starts != nullptr && static_cast<Index>(warm_starts->size()) != p) {
    throw Error(ErrorKind::dimension_mismatch, "one warm start per node is required");
  }
  std::vector<RegressionFit> fits(static_cast<std::size_t>(p));
  detail::parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t k) {
    const Index node = static_cast<Index>(k);
    Matrix sub(p - 1, p - 1);
    Vector cross(p - 1);
    for (Index a = 0; a < p - 1; ++a) {
      const Index va = predictor_variable(node, a);
      cross(a) = gram(va, node);
      for (Index b = 0; b < p - 1; ++b) sub(a, b) = gram(va, predictor_variable(node, b));
    }
    try {
      const Vector* warm = warm_starts != nullptr ? &(*warm_starts)[k] : nullptr;
      fits[k] = fit_lasso_gram(sub, cross, gram(node, node), lambda, options, warm);
    } catch (const Error& e) {
      throw Error(e.kind(), "node " + std::to_string(node) + ": " + e.what(), node, e.value());
    }
    fits[k].node = node;
  });
  return fits;
}

std::vector<RegressionFit> nodewise_regressions(const DataSet& data, double lambda,
                                                const LassoOptions& options, unsigned threads) {
  if (!data.standardized()) {
    throw Error(ErrorKind::invalid_argument, "nodewise regressions expect standardized data");
  }
  return nodewise_regressions_gram(gram_matrix(data.values()), lambda, options, threads);
}

}  // namespace gelato
