#include "gelato/mle.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>

namespace gelato {

const char* to_string(FitScale scale) {
  return scale == FitScale::correlation ? "correlation" : "covariance";
}

double gaussian_objective(const Matrix& theta, const Matrix& s) {
  return (theta.cwiseProduct(s)).sum() - cholesky(theta).log_det();
}

double verify_kkt(const Matrix& theta, const Matrix& sigma, const EdgeSet& edges,
                  const Matrix& input) {
  const Index p = input.rows();
  if (theta.rows() != p || sigma.rows() != p || edges.p() != p) {
    throw Error(ErrorKind::dimension_mismatch, "KKT check dimensions disagree");
  }
  double worst = 0.0;
  for (Index i = 0; i < p; ++i) {
    worst = std::max(worst, std::abs(sigma(i, i) - input(i, i)));
    for (Index j = i + 1; j < p; ++j) {
      if (edges.contains(i, j)) {
        worst = std::max(worst, std::abs(sigma(i, j) - input(i, j)));
      } else {
        worst = std::max(worst, std::max(std::abs(theta(i, j)), std::abs(theta(j, i))));
      }
    }
  }
  return worst;
}

double verify_kkt(const MleResult& result, const SymMatrix& input) {
  return verify_kkt(result.theta_hat.entries(), result.sigma_hat.entries(), result.edge_set,
                    input.entries());
}

Index greedy_clique_bound(const EdgeSet& edges) {
  const Index p = edges.p();
  std::vector<std::set<Index>> adj(static_cast<std::size_t>(p));
  for (const auto& [i, j] : edges.edges()) {
    adj[static_cast<std::size_t>(i)].insert(j);
    adj[static_cast<std::size_t>(j)].insert(i);
  }
  std::vector<bool> gone(static_cast<std::size_t>(p), false);
  Index bound = p > 0 ? 1 : 0;
  for (Index step = 0; step < p; ++step) {
    Index pick = -1;
    for (Index v = 0; v < p; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      if (pick < 0 || adj[static_cast<std::size_t>(v)].size() < adj[static_cast<std::size_t>(pick)].size()) {
        pick = v;
      }
    }
    const auto nbrs = adj[static_cast<std::size_t>(pick)];
    bound = std::max(bound, static_cast<Index>(nbrs.size()) + 1);
    for (Index a : nbrs) {
      auto& na = adj[static_cast<std::size_t>(a)];
      na.erase(pick);
      for (Index b : nbrs) {
        if (a != b) na.insert(b);
      }
    }
    gone[static_cast<std::size_t>(pick)] = true;
    adj[static_cast<std::size_t>(pick)].clear();
  }
  return bound;
}

namespace {

[[noreturn]] void fail_nonexistence(const std::string& why, std::optional<long> node = std::nullopt) {
  throw Error(ErrorKind::mle_nonexistence,
              "maximum likelihood estimate does not exist on this graph (" + why + ")", node);
}

}  // namespace

MleResult fit_constrained_mle(const SymMatrix& input, const EdgeSet& edges,
                              const MleOptions& options) {
  const Index p = input.dim();
  const Matrix& s = input.entries();
  if (edges.p() != p) throw Error(ErrorKind::dimension_mismatch, "edge set and input dimension differ");
  if (input.role() == MatrixRole::precision) {
    throw Error(ErrorKind::invalid_argument, "MLE input must be a covariance or correlation matrix");
  }
  for (Index i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) {
      throw Error(ErrorKind::degenerate_variance, "input has a nonpositive diagonal entry", i);
    }
  }
  const FitScale scale =
      input.role() == MatrixRole::correlation ? FitScale::correlation : FitScale::covariance;

  // Every edge needs a positive definite 2x2 block in the input.
  for (const auto& [i, j] : edges.edges()) {
    const double det = s(i, i) * s(j, j) - s(i, j) * s(i, j);
    if (!(det > 1e-12 * s(i, i) * s(j, j))) fail_nonexistence("singular input block on an edge", i);
  }

  if (edges.size() == static_cast<std::size_t>(p * (p - 1) / 2)) {
    Matrix theta, w;
    try {
      theta = inverse_spd(s);
      w = inverse_spd(theta);
    } catch (const Error&) {
      fail_nonexistence("input is not positive definite");
    }
    const double gap = verify_kkt(theta, w, edges, s);
    return MleResult{SymMatrix(theta, MatrixRole::precision),
                     SymMatrix(w, MatrixRole::covariance),
                     edges,
                     scale,
                     0,
                     gap,
                     gaussian_objective(theta, s),
                     p};
  }

  std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) nbrs[static_cast<std::size_t>(j)] = edges.neighbors(j);

  // Theta^(0) = diag(S)^{-1}; W tracks Theta^{-1}.
  Matrix theta = Matrix::Zero(p, p);
  Matrix w = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    theta(i, i) = 1.0 / s(i, i);
    w(i, i) = s(i, i);
  }
  const double bound = options.divergence_bound * (1.0 / s.diagonal().minCoeff());

  double gap = std::numeric_limits<double>::infinity();
  long cycle = 0;
  while (true) {
    if (cycle >= options.max_cycles) {
      throw Error(ErrorKind::convergence_failure,
                  "constrained MLE did not converge within " + std::to_string(options.max_cycles) +
                      " cycles (KKT gap " + std::to_string(gap) + ")",
                  std::nullopt, gap);
    }
    ++cycle;
    const Matrix w_prev = w;
    for (Index j = 0; j < p; ++j) {
      const auto& nj = nbrs[static_cast<std::size_t>(j)];
      const Index m = static_cast<Index>(nj.size());
      const double sjj = s(j, j);
      const Vector wj = w.col(j);
      const double wjj = wj(j);

      // A = W - w_j w_j^T / w_jj is the inverse of Theta with row/column j
      // removed (zero-padded). Minimizing over row j of Theta gives
      // theta_N = -A_NN^{-1} s_N / s_jj and theta_jj = 1/s_jj + theta_N' A_NN theta_N.
      Vector theta_n(m);
      Vector u = Vector::Zero(p);
      double quad = 0.0;
      if (m > 0) {
        Matrix a_nn(m, m);
        Vector s_n(m);
        for (Index a = 0; a < m; ++a) {
          const Index ia = nj[static_cast<std::size_t>(a)];
          s_n(a) = s(ia, j);
          for (Index b = 0; b < m; ++b) {
            const Index ib = nj[static_cast<std::size_t>(b)];
            a_nn(a, b) = w(ia, ib) - wj(ia) * wj(ib) / wjj;
          }
        }
        Eigen::LLT<Matrix> llt(a_nn);
        if (llt.info() != Eigen::Success) fail_nonexistence("conditional covariance lost definiteness", j);
        theta_n = -llt.solve(s_n) / sjj;
        quad = -theta_n.dot(s_n) / sjj;
        double wn_theta = 0.0;
        for (Index a = 0; a < m; ++a) {
          const Index ia = nj[static_cast<std::size_t>(a)];
          u += w.col(ia) * theta_n(a);
          wn_theta += wj(ia) * theta_n(a);
        }
        u -= wj * (wn_theta / wjj);
        u(j) = 0.0;
      }

      for (Index a = 0; a < m; ++a) {
        const Index ia = nj[static_cast<std::size_t>(a)];
        theta(ia, j) = theta_n(a);
        theta(j, ia) = theta_n(a);
      }
      theta(j, j) = 1.0 / sjj + quad;

      w.noalias() -= wj * wj.transpose() / wjj;
      if (m > 0) w.noalias() += sjj * u * u.transpose();
      w.col(j) = -sjj * u;
      w.row(j) = -sjj * u.transpose();
      w(j, j) = sjj;

      if (!theta.col(j).allFinite() || theta.col(j).cwiseAbs().maxCoeff() > bound) {
        fail_nonexistence("precision entries diverge", j);
      }
    }

    // Refresh W from Theta to keep rank-one drift out of the iteration.
    try {
      w = inverse_spd(theta);
    } catch (const Error&) {
      fail_nonexistence("iterate lost positive definiteness");
    }
    const double change = (w - w_prev).cwiseAbs().maxCoeff();
    if (change < 0.1 * options.tolerance) {
      gap = verify_kkt(theta, w, edges, s);
      if (gap <= 0.1 * options.tolerance) break;
    }
  }

  MleResult result{SymMatrix(theta, MatrixRole::precision),
                   SymMatrix(w, MatrixRole::covariance),
                   edges,
                   scale,
                   cycle,
                   gap,
                   gaussian_objective(theta, s),
                   greedy_clique_bound(edges)};
  return result;
}

namespace {

GelatoEstimate refit(const DataSet& data, const EdgeSet& edges, const GelatoOptions& options) {
  if (!data.standardized()) {
    throw Error(ErrorKind::invalid_argument, "the estimator expects standardized data");
  }
  const SymMatrix s_std = sample_covariance(data);
  const Vector& sd = data.column_scales();
  const Vector inv_sd = sd.cwiseInverse();
  if (options.scale == FitScale::correlation) {
    const SymMatrix gamma = sample_correlation(s_std);
    MleResult mle = fit_constrained_mle(gamma, edges, options.mle);
    SymMatrix theta(inv_sd.asDiagonal() * mle.theta_hat.entries() * inv_sd.asDiagonal(),
                    MatrixRole::precision);
    SymMatrix sigma(sd.asDiagonal() * mle.sigma_hat.entries() * sd.asDiagonal(),
                    MatrixRole::covariance);
    return GelatoEstimate{std::move(mle), std::move(theta), std::move(sigma), edges, 0.0, 0.0};
  }
  const SymMatrix s_raw(sd.asDiagonal() * s_std.entries() * sd.asDiagonal(), MatrixRole::covariance);
  MleResult mle = fit_constrained_mle(s_raw, edges, options.mle);
  SymMatrix theta = mle.theta_hat;
  SymMatrix sigma = mle.sigma_hat;
  return GelatoEstimate{std::move(mle), std::move(theta), std::move(sigma), edges, 0.0, 0.0};
}

}  // namespace

GelatoEstimate refit_on_graph(const DataSet& data, const EdgeSet& edges,
                              const GelatoOptions& options) {
  return refit(data, edges, options);
}

GelatoEstimate gelato_estimate(const DataSet& data, double lambda, double tau,
                               const GelatoOptions& options) {
  if (!data.standardized()) {
    throw Error(ErrorKind::invalid_argument, "the estimator expects standardized data");
  }
  const auto fits = nodewise_regressions(data, lambda, options.lasso, options.threads);
  const EdgeSet edges = combine_edges(threshold_fits(fits, tau), options.rule);
  GelatoEstimate est = refit(data, edges, options);
  est.lambda = lambda;
  est.tau = tau;
  return est;
}

}  // namespace gelato
