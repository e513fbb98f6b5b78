#include "gelato/graph_select.hpp"

#include <cmath>

namespace gelato {

Vector threshold_coefficients(const Vector& beta, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::invalid_argument, "tau must be nonnegative");
  Vector out = beta;
  for (Index j = 0; j < out.size(); ++j) {
    if (!(std::abs(out(j)) > tau)) out(j) = 0.0;
  }
  return out;
}

ThresholdedFits threshold_fits(const std::vector<RegressionFit>& fits, double tau) {
  ThresholdedFits out;
  out.p = static_cast<Index>(fits.size());
  out.tau = tau;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const RegressionFit& fit = fits[k];
    if (fit.node != static_cast<Index>(k) || fit.coefficients.size() != out.p - 1) {
      throw Error(ErrorKind::dimension_mismatch, "fits must be nodewise fits in node order",
                  static_cast<long>(k));
    }
    Vector kept_beta = threshold_coefficients(fit.coefficients, tau);
    std::vector<Index> kept;
    std::vector<Index> dropped;
    for (Index slot = 0; slot < kept_beta.size(); ++slot) {
      const Index j = predictor_variable(fit.node, slot);
      (kept_beta(slot) != 0.0 ? kept : dropped).push_back(j);
    }
    out.coefficients.push_back(std::move(kept_beta));
    out.kept.push_back(std::move(kept));
    out.dropped.push_back(std::move(dropped));
  }
  return out;
}

namespace {

bool survives(const ThresholdedFits& t, Index node, Index j) {
  return t.coefficients[static_cast<std::size_t>(node)](predictor_slot(node, j)) != 0.0;
}

}  // namespace

EdgeSet combine_edges(const ThresholdedFits& t, EdgeRule rule) {
  EdgeSet edges(t.p);
  for (Index i = 0; i < t.p; ++i) {
    for (Index j = i + 1; j < t.p; ++j) {
      const bool a = survives(t, i, j);
      const bool b = survives(t, j, i);
      if (rule == EdgeRule::or_rule ? (a || b) : (a && b)) edges.add(i, j);
    }
  }
  return edges;
}

EdgeSet or_rule_edges(const ThresholdedFits& t) { return combine_edges(t, EdgeRule::or_rule); }

EdgeSet and_rule_edges(const ThresholdedFits& t) { return combine_edges(t, EdgeRule::and_rule); }

EdgeSet select_graph(const DataSet& data, double lambda, double tau, EdgeRule rule,
                     const LassoOptions& options, unsigned threads) {
  const auto fits = nodewise_regressions(data, lambda, options, threads);
  return combine_edges(threshold_fits(fits, tau), rule);
}

}  // namespace gelato
