#pragma once

// Thresholding of nodewise lasso coefficients and assembly of the edge set.

#include <vector>

#include "gelato/core.hpp"
#include "gelato/lasso.hpp"

namespace gelato {

enum class EdgeRule { or_rule, and_rule };

struct ThresholdedFits {
  Index p = 0;
  double tau = 0.0;
  /// Per node, coefficients after thresholding (slot layout of RegressionFit).
  std::vector<Vector> coefficients;
  /// Per node, variables whose coefficient survived (|beta| > tau).
  std::vector<std::vector<Index>> kept;
  /// Per node, the remaining variables.
  std::vector<std::vector<Index>> dropped;
};

/// Zeroes entries with |beta| <= tau; survivors keep their values.
Vector threshold_coefficients(const Vector& beta, double tau);

ThresholdedFits threshold_fits(const std::vector<RegressionFit>& fits, double tau);

EdgeSet or_rule_edges(const ThresholdedFits& thresholded);
EdgeSet and_rule_edges(const ThresholdedFits& thresholded);
EdgeSet combine_edges(const ThresholdedFits& thresholded, EdgeRule rule);

/// Nodewise lasso, thresholding and edge assembly in one call.
EdgeSet select_graph(const DataSet& data, double lambda, double tau,
                     EdgeRule rule = EdgeRule::or_rule, const LassoOptions& options = {},
                     unsigned threads = 1);

}  // namespace gelato
