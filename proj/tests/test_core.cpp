#include <doctest.h>

#include <cmath>

#include "gelato/core.hpp"
#include "oracles.hpp"

using namespace gelato;

TEST_CASE("standardize: small column") {
  Matrix x(3, 2);
  x << 1, 4, 2, 7, 3, 1;
  const DataSet s = standardize(DataSet(x));
  CHECK(s.standardized());
  CHECK(s.values()(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(std::abs(s.values()(1, 0)) < 1e-15);
  CHECK(s.values()(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
  CHECK(s.column_scales()(0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  for (Index j = 0; j < 2; ++j) {
    CHECK(std::abs(s.values().col(j).mean()) <= 1e-12);
    CHECK(s.values().col(j).squaredNorm() / 3.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("standardize is idempotent") {
  const Matrix x = oracle::random_matrix(25, 4, 3);
  const DataSet once = standardize(DataSet(x));
  const DataSet twice = standardize(once);
  CHECK((once.values() - twice.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("standardize rejects a constant column") {
  Matrix x(4, 3);
  x << 1, 5, 2, 2, 5, 1, 3, 5, 0, 4, 5, 2;
  try {
    standardize(DataSet(x));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_column);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 1);
  }
}

TEST_CASE("DataSet shape checks") {
  CHECK_THROWS_AS(DataSet(Matrix::Ones(1, 3)), Error);
  CHECK_THROWS_AS(DataSet(Matrix::Ones(3, 1)), Error);
  Matrix bad = Matrix::Ones(3, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(DataSet{bad}, Error);
}

TEST_CASE("sample_covariance") {
  Matrix x(2, 2);
  x << 1, 0, 0, 1;
  const SymMatrix s = sample_covariance(x);
  CHECK(s(0, 0) == 0.5);
  CHECK(s(1, 1) == 0.5);
  CHECK(s(0, 1) == 0.0);
  CHECK(s.role() == MatrixRole::covariance);

  Matrix one(1, 2);
  one << 3, -2;
  const SymMatrix r = sample_covariance(one);
  CHECK(r(0, 0) == 9.0);
  CHECK(r(0, 1) == -6.0);
  CHECK(r(1, 1) == 4.0);

  const Matrix z = oracle::random_matrix(10, 3, 11);
  const SymMatrix sz = sample_covariance(z);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (Index k = 0; k < 10; ++k) acc += z(k, i) * z(k, j);
      CHECK(std::abs(sz(i, j) - acc / 10.0) <= 1e-12);
    }
}

TEST_CASE("sample_correlation") {
  Matrix c(2, 2);
  c << 4, 2, 2, 4;
  const SymMatrix g = sample_correlation(SymMatrix(c, MatrixRole::covariance));
  CHECK(g.role() == MatrixRole::correlation);
  CHECK(g(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g(0, 0) == 1.0);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 2, 3, 7;
  CHECK(sample_correlation(SymMatrix(d, MatrixRole::covariance)).entries() == Matrix::Identity(3, 3));

  const Matrix x = oracle::random_matrix(20, 4, 5);
  const Matrix ref = oracle::loop_correlation(x);
  const SymMatrix gx = sample_correlation(sample_covariance(x));
  CHECK((gx.entries() - ref).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = 0.0;
  CHECK_THROWS_AS(sample_correlation(SymMatrix(bad, MatrixRole::covariance)), Error);
}

TEST_CASE("standardized data has an exactly unit correlation diagonal") {
  const DataSet s = standardize(DataSet(oracle::random_matrix(30, 5, 8)));
  const SymMatrix g = sample_correlation(sample_covariance(s));
  for (Index i = 0; i < 5; ++i) CHECK(g(i, i) == 1.0);
}

TEST_CASE("SymMatrix invariants") {
  Matrix a(2, 2);
  a << 1, 0.5, 0.5 + 1e-13, 1;
  const SymMatrix s(a, MatrixRole::covariance);
  CHECK(s(0, 1) == s(1, 0));
  a(1, 0) = 0.6;
  CHECK_THROWS_AS(SymMatrix(a, MatrixRole::covariance), Error);
  Matrix c = Matrix::Identity(2, 2);
  c(0, 0) = 1.1;
  CHECK_THROWS_AS(SymMatrix(c, MatrixRole::correlation), Error);
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(Matrix(Matrix::Identity(4, 4))) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, -5, 1;
  CHECK(operator_norm(d) == doctest::Approx(5.0).epsilon(1e-10));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Matrix a = oracle::random_matrix(6, 6, seed);
    a = (a + a.transpose()).eval();
    const auto ev = oracle::jacobi_eigenvalues(a);
    const double ref = std::max(std::abs(ev.front()), std::abs(ev.back()));
    CHECK(std::abs(operator_norm(a) - ref) <= 1e-7 * ref);
    CHECK(operator_norm(a) <= a.norm() * (1 + 1e-12));
  }
}

TEST_CASE("frobenius_diff") {
  const Matrix a = oracle::random_matrix(4, 4, 2);
  CHECK(frobenius_diff(a, a) == 0.0);
  CHECK(frobenius_diff(Matrix(Matrix::Identity(2, 2)), Matrix(Matrix::Zero(2, 2))) ==
        doctest::Approx(std::sqrt(2.0)));
  const Matrix b = oracle::random_matrix(4, 4, 3);
  CHECK(std::abs(frobenius_diff(a, b) - oracle::loop_frobenius(a, b)) <= 1e-12);
  CHECK_THROWS_AS(frobenius_diff(a, Matrix(Matrix::Zero(3, 3))), Error);
}

TEST_CASE("cholesky, log_det and inverse") {
  const CholeskyFactor id = cholesky(Matrix(Matrix::Identity(3, 3)));
  CHECK(id.lower() == Matrix::Identity(3, 3));
  CHECK(id.log_det() == 0.0);

  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  CHECK(log_det(SymMatrix(d, MatrixRole::covariance)) == doctest::Approx(std::log(36.0)).epsilon(1e-14));

  Matrix ar(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) ar(i, j) = std::pow(0.9, std::abs(static_cast<double>(i - j)));
  const SymMatrix sig(ar, MatrixRole::covariance);
  const SymMatrix inv = inverse(sig);
  CHECK(inv.role() == MatrixRole::precision);
  CHECK((inv.entries() - oracle::gauss_jordan_inverse(ar)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((inv.entries() * ar - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::abs(log_det(inv) + log_det(sig)) <= 1e-8);
  CHECK(std::abs(log_det(sig) - std::log(oracle::cofactor_det(ar))) <= 1e-10);

  const Matrix spd = oracle::random_spd(7, 9);
  const Matrix rec = cholesky(spd).reconstruct();
  CHECK((rec - spd).norm() <= 1e-10 * spd.norm());
}

TEST_CASE("cholesky reports the failing pivot") {
  Matrix m(3, 3);
  m << 1, 0, 0, 0, 1, 2, 0, 2, 1;
  try {
    cholesky(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_positive_definite);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 2);
  }
}

TEST_CASE("EdgeSet") {
  EdgeSet e(4);
  CHECK(e.add(2, 1));
  CHECK_FALSE(e.add(1, 2));
  CHECK(e.contains(1, 2));
  CHECK(e.contains(2, 1));
  CHECK(e.size() == 1);
  CHECK_THROWS_AS(e.add(3, 3), Error);
  CHECK(EdgeSet::complete(5).size() == 10);
  const EdgeSet a = EdgeSet::from_pairs(4, {{0, 1}, {2, 3}});
  const EdgeSet b = EdgeSet::from_pairs(4, {{3, 2}});
  CHECK(b.is_subset_of(a));
  CHECK(a.minus(b) == EdgeSet::from_pairs(4, {{0, 1}}));
  CHECK(a.neighbors(3) == std::vector<Index>{2});
}

TEST_CASE("symmetric_eigenvalues agrees with Jacobi") {
  const Matrix a = oracle::random_spd(6, 4);
  const Vector ev = symmetric_eigenvalues(a);
  const auto ref = oracle::jacobi_eigenvalues(a);
  for (Index i = 0; i < 6; ++i) CHECK(std::abs(ev(i) - ref[static_cast<std::size_t>(i)]) <= 1e-10);
}

TEST_CASE("operator_norm with nearly equal top eigenvalues") {
  // Two blocks whose largest magnitudes differ by about 3e-4 relative.
  Matrix m = Matrix::Zero(40, 40);
  for (Index b = 0; b < 2; ++b)
    for (Index i = 0; i < 20; ++i) {
      const Index r = 20 * b + i;
      m(r, r) = -(1.0 + 0.81) * (b == 0 ? 1.0 : 1.0003);
      if (i + 1 < 20) m(r, r + 1) = m(r + 1, r) = 0.9;
    }
  const auto ev = oracle::jacobi_eigenvalues(m);
  const double ref = std::max(std::abs(ev.front()), std::abs(ev.back()));
  CHECK(std::abs(operator_norm(m) - ref) <= 1e-8 * ref);
}
