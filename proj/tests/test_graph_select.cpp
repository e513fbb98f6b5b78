#include <doctest.h>

#include <limits>

#include "gelato/graph_select.hpp"
#include "gelato/simulate.hpp"
#include "gelato/tuning.hpp"

using namespace gelato;

namespace {

std::vector<RegressionFit> fits_from(const Matrix& b) {
  // b(i, j) is the coefficient on variable j in the regression of i.
  const Index p = b.rows();
  std::vector<RegressionFit> fits(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) {
    auto& f = fits[static_cast<std::size_t>(i)];
    f.node = i;
    f.coefficients = Vector::Zero(p - 1);
    for (Index j = 0; j < p; ++j)
      if (j != i) f.coefficients(predictor_slot(i, j)) = b(i, j);
  }
  return fits;
}

}  // namespace

TEST_CASE("threshold_coefficients") {
  Vector b(3);
  b << 0.3, -0.05, 0.0;
  const Vector t = threshold_coefficients(b, 0.1);
  CHECK(t(0) == 0.3);
  CHECK(t(1) == 0.0);
  CHECK(t(2) == 0.0);
  CHECK(threshold_coefficients(b, 0.0) == b);
  CHECK(threshold_coefficients(Vector::Constant(1, 0.1), 0.1)(0) == 0.0);
}

TEST_CASE("kept and dropped sets partition the other nodes") {
  Matrix b = Matrix::Zero(4, 4);
  b(0, 1) = 0.5;
  b(0, 2) = 0.05;
  b(3, 0) = -0.7;
  const ThresholdedFits t = threshold_fits(fits_from(b), 0.1);
  for (Index i = 0; i < 4; ++i) {
    CHECK(t.kept[i].size() + t.dropped[i].size() == 3);
  }
  CHECK(t.kept[0] == std::vector<Index>{1});
  CHECK(t.kept[3] == std::vector<Index>{0});
}

TEST_CASE("OR and AND rules") {
  Matrix b = Matrix::Zero(2, 2);
  b(1, 0) = 0.4;
  const ThresholdedFits t = threshold_fits(fits_from(b), 0.0);
  CHECK(or_rule_edges(t).contains(0, 1));
  CHECK_FALSE(and_rule_edges(t).contains(0, 1));
  b(0, 1) = 0.2;
  CHECK(and_rule_edges(threshold_fits(fits_from(b), 0.0)).contains(0, 1));

  CHECK(or_rule_edges(threshold_fits(fits_from(Matrix::Zero(3, 3)), 0.0)).empty());
}

TEST_CASE("4-node cyclic pattern matches a pairwise oracle") {
  Matrix b = Matrix::Zero(4, 4);
  b(0, 1) = 0.3;
  b(1, 2) = 0.3;
  b(2, 3) = 0.3;
  b(3, 0) = 0.3;
  b(2, 1) = 0.3;
  const ThresholdedFits t = threshold_fits(fits_from(b), 0.1);
  const EdgeSet e_or = or_rule_edges(t);
  const EdgeSet e_and = and_rule_edges(t);
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) {
      CHECK(e_or.contains(i, j) == (b(i, j) != 0 || b(j, i) != 0));
      CHECK(e_and.contains(i, j) == (b(i, j) != 0 && b(j, i) != 0));
    }
  CHECK(e_and.is_subset_of(e_or));
  std::size_t kept = 0;
  for (const auto& k : t.kept) kept += k.size();
  CHECK(e_or.size() <= kept);
}

TEST_CASE("select_graph monotone in tau") {
  const DataSet d = sample_gaussian(gen_ar1_block(12, 6, 0.9).sigma0, 80, 4);
  const double lam = 0.1;
  const EdgeSet e0 = select_graph(d, lam, 0.0);
  EdgeSet prev = e0;
  for (double tau : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const EdgeSet e = select_graph(d, lam, tau);
    CHECK(e.is_subset_of(prev));
    prev = e;
  }
  CHECK(select_graph(d, lam, std::numeric_limits<double>::infinity()).empty());
  CHECK(select_graph(d, lam, 10.0).empty());
}

TEST_CASE("edge sets relabel under variable permutation") {
  const DataSet d = sample_gaussian(gen_ar1_block(8, 4, 0.8).sigma0, 60, 12);
  std::vector<Index> perm{5, 2, 7, 0, 3, 1, 6, 4};
  Matrix xp(d.n(), 8);
  for (Index j = 0; j < 8; ++j) xp.col(j) = d.values().col(perm[j]);
  const DataSet dp = standardize(DataSet(xp));
  const EdgeSet e = select_graph(d, 0.15, 0.1);
  const EdgeSet ep = select_graph(dp, 0.15, 0.1);
  CHECK(e.size() == ep.size());
  for (const auto& [a, b] : ep.edges()) CHECK(e.contains(perm[a], perm[b]));
}

TEST_CASE("no cross-block edges for two AR(1) blocks at n=320") {
  const TrueModel m = gen_ar1_block(20, 10, 0.9);
  const double lam = theoretical_lambda(20, 320, 2.0);
  const double tau = theoretical_tau(20, 320, 2.0, 1.0);
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const EdgeSet e = select_graph(sample_gaussian(m.sigma0, 320, seed), lam, tau);
    bool cross = false;
    for (const auto& [i, j] : e.edges()) cross = cross || (i / 10 != j / 10);
    clean += cross ? 0 : 1;
  }
  CHECK(clean >= 18);
}
