#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gelato/simulate.hpp"
#include "gelato/tuning.hpp"

using namespace gelato;

TEST_CASE("make_grids") {
  const TuningConfig c = make_grids(300, 40);
  REQUIRE(c.lambda_grid.size() == 10);
  REQUIRE(c.tau_grid.size() == 10);
  const double base = std::sqrt(std::log(300.0) / 40.0);
  CHECK(base == doctest::Approx(0.37762).epsilon(1e-4));
  CHECK(c.lambda_grid[5] == doctest::Approx(base).epsilon(1e-14));
  CHECK(c.lambda_grid[0] == doctest::Approx(0.0037762).epsilon(1e-4));
  CHECK(c.tau_grid[5] == doctest::Approx(0.75 * base).epsilon(1e-14));
  CHECK(std::is_sorted(c.lambda_grid.begin(), c.lambda_grid.end()));
  CHECK(c.lambda_grid.front() > 0);
  CHECK_THROWS_AS(make_grids(10, 40, {1.0, -1.0}), Error);
}

TEST_CASE("theoretical rates") {
  CHECK(universal_rate(60, 40) == doctest::Approx(std::sqrt(2 * std::log(60.0) / 40)));
  CHECK(theoretical_lambda(60, 40, 2.0) == doctest::Approx(2 * universal_rate(60, 40)));
  CHECK(theoretical_tau(60, 40, 2.0, 1.5) == doctest::Approx(3 * universal_rate(60, 40)));
}

TEST_CASE("fold assignment") {
  const auto folds = fold_assignment(23, 5, 7);
  REQUIRE(folds.size() == 5);
  std::set<Index> seen;
  for (std::size_t f = 0; f < 5; ++f) {
    CHECK(folds[f].size() == (f < 3 ? 5u : 4u));
    seen.insert(folds[f].begin(), folds[f].end());
  }
  CHECK(seen.size() == 23);
  CHECK(fold_assignment(23, 5, 7) == folds);
  CHECK_FALSE(fold_assignment(23, 5, 8) == folds);
  CHECK_THROWS_AS(fold_assignment(3, 5, 1), Error);
}

TEST_CASE("one-value grids are returned directly") {
  const DataSet d = sample_gaussian(gen_ar1_block(6, 0, 0.8).sigma0, 40, 1);
  TuningConfig c = make_grids(6, 40, {1.0}, {1.0}, 5, 3);
  CHECK(cv_lambda(d, c).chosen == c.lambda_grid[0]);
  CHECK(cv_tau(d, 0.2, c).chosen == c.tau_grid[0]);
}

TEST_CASE("cv_lambda on pure noise prefers heavy penalties") {
  const SymMatrix id = SymMatrix::identity(10, MatrixRole::covariance);
  int upper = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DataSet d = sample_gaussian(id, 100, seed);
    const TuningConfig c = make_grids(10, 100, {}, {}, 10, seed);
    const CvResult r = cv_lambda(d, c);
    upper += r.chosen_index >= 5 ? 1 : 0;
  }
  CHECK(upper >= 8);
}

TEST_CASE("cv_lambda on strong AR(1) signal prefers light penalties") {
  const SymMatrix s = gen_ar1_block(30, 0, 0.9).sigma0;
  int lower = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DataSet d = sample_gaussian(s, 320, seed);
    const CvResult r = cv_lambda(d, make_grids(30, 320, {}, {}, 10, seed));
    lower += r.chosen_index < 5 ? 1 : 0;
  }
  CHECK(lower >= 8);
}

TEST_CASE("cv_tau argmin contract") {
  const SymMatrix s = gen_ar1_block(30, 0, 0.9).sigma0;
  const DataSet d = sample_gaussian(s, 320, 4);
  const TuningConfig c = make_grids(30, 320, {}, {}, 10, 4);
  const double lam = cv_lambda(d, c).chosen;
  const CvResult r = cv_tau(d, lam, c);
  CHECK(std::find(c.tau_grid.begin(), c.tau_grid.end(), r.chosen) != c.tau_grid.end());
  for (double score : r.scores) CHECK(r.scores[r.chosen_index] <= score);

  // A zero-threshold candidate can only be as good as the selected one.
  TuningConfig with_zero = c;
  with_zero.tau_grid.insert(with_zero.tau_grid.begin(), 0.0);
  const CvResult rz = cv_tau(d, lam, with_zero);
  CHECK(rz.scores[rz.chosen_index] <= rz.scores[0]);

  CHECK(cv_tau(d, lam, c).scores == r.scores);
}

TEST_CASE("identity scores about p on held-out data") {
  const DataSet d = sample_gaussian(SymMatrix::identity(8, MatrixRole::covariance), 500, 2);
  const Matrix s = sample_covariance(d).entries();
  CHECK(heldout_score(Matrix::Identity(8, 8), s) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("parse_tuning_choice") {
  CHECK(parse_tuning_choice("cv").mode == TuningChoice::Mode::cv);
  const TuningChoice r = parse_tuning_choice("rate:2.5");
  CHECK(r.mode == TuningChoice::Mode::rate);
  CHECK(r.value == 2.5);
  CHECK(parse_tuning_choice("0.3").value == 0.3);
  CHECK(std::isinf(parse_tuning_choice("inf").value));
  CHECK_THROWS_AS(parse_tuning_choice("fast"), Error);
  CHECK_THROWS_AS(parse_tuning_choice("-1"), Error);
  CHECK_THROWS_AS(parse_tuning_choice("rate:"), Error);
}

TEST_CASE("resolve_tuning with rates") {
  const DataSet d = sample_gaussian(gen_ar1_block(10, 0, 0.9).sigma0, 50, 1);
  const ResolvedTuning t = resolve_tuning(d, TuningChoice::rate(2.0), TuningChoice::rate(1.5), 5, 0);
  CHECK(t.lambda == doctest::Approx(theoretical_lambda(10, 50, 2.0)));
  CHECK(t.tau == doctest::Approx(theoretical_tau(10, 50, 2.0, 1.5)));
  CHECK_FALSE(t.lambda_cv.has_value());
}
