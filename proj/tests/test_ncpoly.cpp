#include <doctest.h>

#include "ncfree/errors.hpp"
#include "ncfree/ncpoly.hpp"
#include "support.hpp"

using namespace ncfree;
using ncfree::testing::Z;

TEST_CASE("scalar arithmetic is exact") {
  const Scalar a = Scalar::parse("1/2+3/4 i");
  CHECK(a.re() == mpq_class(1, 2));
  CHECK(a.im() == mpq_class(3, 4));
  CHECK(a * a.conj() == Scalar(mpq_class(13, 16)));
  CHECK((a / a) == Scalar(1));
  CHECK(Scalar::parse(a.str()) == a);
  CHECK(Scalar::parse("-i") == -Scalar::i());
  CHECK(Scalar::parse("-2 i") == Scalar(0, -2));
  CHECK_THROWS_AS(a / Scalar(0), DomainError);
  CHECK_THROWS_AS(Scalar::parse("1/0"), ParseError);
}

TEST_CASE("add") {
  const int n = 2;
  CHECK((Z(n, {1}) + Z(n, {1}, -1)).is_zero());
  const NcPoly s = Z(n, {1, 2}) + Z(n, {2, 1});
  CHECK(s.term_count() == 2);
  CHECK((Z(n, {1}, 2) + NcPoly::constant(n, 1)) + Z(n, {1}, 3) == Z(n, {1}, 5) + NcPoly::constant(n, 1));
  CHECK_THROWS_AS(Z(1, {1}) + Z(2, {1}), GeneratorMismatch);
}

TEST_CASE("mul") {
  const int n = 2;
  CHECK(Z(n, {1}) * Z(n, {2}) == Z(n, {1, 2}));
  CHECK(!(Z(n, {1, 2}) == Z(n, {2, 1})));
  const NcPoly p = Z(n, {1, 2}, 3) + Z(n, {2});
  CHECK(NcPoly::constant(n, 1) * p == p);
  CHECK((Z(n, {1}) + Z(n, {2})) * (Z(n, {1}) - Z(n, {2})) ==
        Z(n, {1, 1}) - Z(n, {1, 2}) + Z(n, {2, 1}) - Z(n, {2, 2}));
  CHECK_THROWS_AS(Z(1, {1}) * Z(2, {1}), GeneratorMismatch);
}

TEST_CASE("star") {
  const int n = 2;
  CHECK(star(Z(n, {1, 2}, Scalar::i())) == Z(n, {2, 1}, -Scalar::i()));
  const NcPoly p = Z(n, {1, 2}) + Z(n, {2, 1});
  CHECK(star(p) == p);
  CHECK(p.is_self_adjoint());
  CHECK(star(NcPoly::constant(n, 1)) == NcPoly::constant(n, 1));
}

TEST_CASE("degree and leading part") {
  const int n = 2;
  const NcPoly p = Z(n, {1, 2, 1}) + Z(n, {2});
  CHECK(total_degree(p) == 3);
  CHECK(leading_part(p) == Z(n, {1, 2, 1}));
  CHECK(total_degree(NcPoly::constant(n, 5)) == 0);
  const NcPoly q = Z(n, {1, 2}) + Z(n, {2, 1});
  CHECK(total_degree(q) == 2);
  CHECK(leading_part(q) == q);
  CHECK(total_degree(NcPoly(n)) == kZeroPolyDegree);
  CHECK_THROWS_AS(leading_part(NcPoly(n)), DomainError);
}

TEST_CASE("text format") {
  const NcPoly p = NcPoly::parse("1 * Z 1 2 + 1 * Z 2 1", 2);
  CHECK(p == Z(2, {1, 2}) + Z(2, {2, 1}));
  CHECK(p.str() == "1 * Z 1 2 + 1 * Z 2 1");
  CHECK(NcPoly::parse("Z 1 1 - 1", 1) == Z(1, {1, 1}) - NcPoly::constant(1, 1));
  CHECK(NcPoly::parse("1/2+3 i * Z 2 - 2 * 1", 2) == Z(2, {2}, Scalar(mpq_class(1, 2), 3)) - NcPoly::constant(2, 2));
  CHECK(NcPoly::parse("0", 3).is_zero());
  CHECK(NcPoly(3).str() == "0");
  CHECK_THROWS_AS(NcPoly::parse("Z 3", 2), GeneratorMismatch);
  CHECK_THROWS_AS(NcPoly::parse("2 * * Z 1", 2), ParseError);
  CHECK_THROWS_AS(NcPoly::parse("Z", 2), ParseError);

  ncfree::testing::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const NcPoly q = ncfree::testing::random_poly(rng, 3, 5, 6);
    CHECK(NcPoly::parse(q.str(), 3) == q);
  }
}

TEST_CASE("evaluate") {
  Eigen::MatrixXcd a(2, 2);
  a << 1, std::complex<double>(0, 2), std::complex<double>(0, -2), 3;
  const std::vector<Eigen::MatrixXcd> one = {a};
  CHECK((evaluate(Z(1, {1}), one) - a).norm() == 0.0);
  CHECK((evaluate(NcPoly::constant(1, 1), one) - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);

  Eigen::MatrixXcd d1 = Eigen::VectorXcd::LinSpaced(3, 1, 3).asDiagonal();
  Eigen::MatrixXcd d2 = Eigen::VectorXcd::LinSpaced(3, -2, 5).asDiagonal();
  const std::vector<Eigen::MatrixXcd> diag = {d1, d2};
  CHECK(evaluate(Z(2, {1, 2}) - Z(2, {2, 1}), diag).norm() == 0.0);

  Eigen::MatrixXcd bad(2, 2);
  bad << 0, 1, 0, 0;
  const std::vector<Eigen::MatrixXcd> nonherm = {bad};
  CHECK_THROWS_AS(evaluate(Z(1, {1}), nonherm), DomainError);
  const std::vector<Eigen::MatrixXcd> mixed = {a, d1};
  CHECK_THROWS_AS(evaluate(Z(2, {1}), mixed), DomainError);
  CHECK_THROWS_AS(evaluate(Z(2, {1}), one), GeneratorMismatch);
}

TEST_CASE("property: ring axioms and star anti-automorphism") {
  ncfree::testing::Rng rng(1);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = ncfree::testing::uniform_int(rng, 1, 3);
    const NcPoly p = ncfree::testing::random_poly(rng, n, 3);
    const NcPoly q = ncfree::testing::random_poly(rng, n, 3);
    const NcPoly r = ncfree::testing::random_poly(rng, n, 2);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK((p + q) * r == p * r + q * r);
    CHECK(p * NcPoly::constant(n, 1) == p);
    CHECK(star(p * q) == star(q) * star(p));
    CHECK(star(star(p)) == p);
    CHECK((p - p).is_zero());
  }
}

TEST_CASE("property: evaluate is a unital *-homomorphism") {
  ncfree::testing::Rng rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = ncfree::testing::uniform_int(rng, 1, 3);
    const int dim = ncfree::testing::uniform_int(rng, 1, 8);
    std::vector<Eigen::MatrixXcd> x;
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = {g(rng), g(rng)};
      x.push_back((m + m.adjoint()) / 4.0);
    }
    const NcPoly p = ncfree::testing::random_poly(rng, n, 3);
    const NcPoly q = ncfree::testing::random_poly(rng, n, 3);
    const Eigen::MatrixXcd ep = evaluate(p, x), eq = evaluate(q, x);
    const double scale = 1 + ep.norm() * eq.norm();
    CHECK((evaluate(p * q, x) - ep * eq).norm() <= 1e-10 * scale);
    CHECK((evaluate(star(p), x) - ep.adjoint()).norm() <= 1e-10 * (1 + ep.norm()));
  }
}
