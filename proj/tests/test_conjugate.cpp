#include <doctest.h>

#include <cmath>

#include "ncfree/conjugate.hpp"
#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "support.hpp"

using namespace ncfree;
using ncfree::testing::Z;

namespace {

TensorPoly2 T(const NcPoly& a, const NcPoly& b) { return TensorPoly2::simple({a, b}); }

}  // namespace

TEST_CASE("check_conjugate") {
  SUBCASE("semicircular pair passes at degree 8") {
    const auto c = ConjugateCandidate::semicircular(DistributionSpec::standard_semicircular(2));
    const auto r = check_conjugate(c, 8);
    CHECK(r.passed());
    CHECK(r.words_checked == 511);
    CHECK(r.max_degree_checked == 8);
    CHECK(r.not_self_adjoint.empty());
  }
  SUBCASE("wrong scaling is pinpointed") {
    const DistributionSpec spec = DistributionSpec::standard_semicircular(1);
    const ConjugateCandidate c({Z(1, {1}, 2)}, TraceFunctional(spec));
    const auto r = check_conjugate(c, 2);
    REQUIRE(!r.passed());
    CHECK(r.failures.front().j == 1);
    CHECK(r.failures.front().word == Word{1});
    CHECK(r.failures.front().lhs == Scalar(1));
    CHECK(r.failures.front().rhs == Scalar(2));
    CHECK(r.failures.size() == 1);  // Z1^2 gives 0 == 0, unit gives 0 == 0
  }
  SUBCASE("degree 0 checks the mean of xi") {
    const DistributionSpec spec = DistributionSpec::standard_semicircular(1);
    CHECK(check_conjugate(ConjugateCandidate({Z(1, {1})}, TraceFunctional(spec)), 0).passed());
    const auto r = check_conjugate(ConjugateCandidate({Z(1, {1, 1})}, TraceFunctional(spec)), 0);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].lhs == Scalar(0));
    CHECK(r.failures[0].rhs == Scalar(1));
  }
  SUBCASE("scaled variances, n = 3") {
    const auto spec = DistributionSpec::semicircular({mpq_class(1, 2), 2, mpq_class(5, 3)}, 10);
    CHECK(check_conjugate(ConjugateCandidate::semicircular(spec), 6).passed());
  }
  SUBCASE("non-self-adjoint candidates and degree bounds are reported") {
    const DistributionSpec spec = DistributionSpec::standard_semicircular(1, 6);
    const ConjugateCandidate c({Z(1, {1}, Scalar::i())}, TraceFunctional(spec));
    const auto r = check_conjugate(c, 2);
    CHECK(r.not_self_adjoint == std::vector<Word::Letter>{1});
    CHECK_THROWS_AS(check_conjugate(ConjugateCandidate::semicircular(spec), 6), DegreeBoundExceeded);
    CHECK_THROWS_AS(ConjugateCandidate({}, TraceFunctional(spec)), GeneratorMismatch);
  }
}

TEST_CASE("dstar closed forms") {
  const int n = 2;
  const auto c = ConjugateCandidate::semicircular(DistributionSpec::standard_semicircular(n));
  const auto& t = c.trace;
  const NcPoly one = NcPoly::constant(n, 1);
  for (int j = 1; j <= n; ++j) CHECK(dstar(c, j, TensorPoly2::unit(n)) == c[j]);

  ncfree::testing::Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const NcPoly p = ncfree::testing::random_poly(rng, n, 6);
    const int j = ncfree::testing::uniform_int(rng, 1, n);
    CHECK(dstar(c, j, T(p, one)) == p * c[j] - partial_trace(t, d(j, p), Side::Right));
    CHECK(dstar(c, j, T(one, p)) == c[j] * p - partial_trace(t, d(j, p), Side::Left));
  }
}

TEST_CASE("adjointness") {
  const int n = 2;
  const auto c = ConjugateCandidate::semicircular(DistributionSpec::standard_semicircular(n));
  CHECK(inner(c.trace, dstar(c, 1, TensorPoly2::unit(n)), Z(n, {1})) == Scalar(1));
  CHECK(inner2(c.trace, TensorPoly2::unit(n), d(1, Z(n, {1}))) == Scalar(1));

  ncfree::testing::Rng rng(42);
  for (int trial = 0; trial < 120; ++trial) {
    const TensorPoly2 y = ncfree::testing::random_tensor(rng, n, 2, 3);
    const NcPoly q = ncfree::testing::random_poly(rng, n, 4);
    const int j = ncfree::testing::uniform_int(rng, 1, n);
    CHECK(check_adjoint(c, j, y, q));
    // q = 1: the derivative side vanishes, so dstar(y) has mean zero
    CHECK(trace_poly(c.trace, dstar(c, j, y)) == Scalar(0));
    CHECK(check_adjoint(c, j, y, NcPoly::constant(n, 1)));
  }
  // a wrong candidate breaks adjointness somewhere
  const ConjugateCandidate bad({Z(n, {1}, 2), Z(n, {2})}, c.trace);
  CHECK_FALSE(check_adjoint(bad, 1, TensorPoly2::unit(n), Z(n, {1})));
}

TEST_CASE("duality identity") {
  const int n = 2;
  const TraceFunctional t(DistributionSpec::standard_semicircular(n));
  const NcPoly one = NcPoly::constant(n, 1);
  for (int i = 1; i <= n; ++i) {
    const auto s = duality_sides(t, one, NcPoly::generator(n, i), i);
    CHECK(s.lhs == one);
    CHECK(s.rhs == one);
  }
  const auto s = duality_sides(t, Z(n, {1}), Z(n, {1, 2, 1}), 2);
  CHECK(s.lhs == Z(n, {1}));
  CHECK(s.rhs == Z(n, {1}));

  ncfree::testing::Rng rng(43);
  const TraceFunctional t3(DistributionSpec::semicircular({1, mpq_class(1, 3), 2}));
  for (int trial = 0; trial < 200; ++trial) {
    const NcPoly p1 = NcPoly::monomial(3, ncfree::testing::random_word(rng, 3, 0, 5), ncfree::testing::small_scalar(rng));
    const NcPoly p2 = NcPoly::monomial(3, ncfree::testing::random_word(rng, 3, 0, 5), ncfree::testing::small_scalar(rng));
    CHECK(check_duality(t3, p1, p2, ncfree::testing::uniform_int(rng, 1, 3)));
  }
}

TEST_CASE("norm estimates") {
  const int n = 1;
  const auto c = ConjugateCandidate::semicircular(DistributionSpec::standard_semicircular(n));
  const auto m1 = dabrowski_margins(c, 1, NcPoly::constant(n, 1), 1);
  CHECK(m1.lhs_right == doctest::Approx(1.0));
  CHECK(std::abs(m1.margin_right()) < 1e-12);
  CHECK(std::abs(m1.margin_left()) < 1e-12);

  const auto mz = dabrowski_margins_with_norm(c, 1, Z(n, {1}), 2.0);
  CHECK(mz.lhs_right == doctest::Approx(1.0));
  CHECK(mz.lhs_left == doctest::Approx(1.0));
  CHECK(mz.bound == doctest::Approx(2.0));
  CHECK(mz.lhs_partial_right == doctest::Approx(1.0));
  CHECK(mz.margin_right() == doctest::Approx(1.0));

  // opnorm_lower grows toward the true norm 2, so the lower-bound margin grows with k
  const auto k1 = dabrowski_margins(c, 1, Z(n, {1}), 1);
  const auto k5 = dabrowski_margins(c, 1, Z(n, {1}), 5);
  CHECK(k5.bound >= k1.bound);
  CHECK(k5.bound < 2.0);
}

TEST_CASE("free Fisher information") {
  for (int n = 1; n <= 3; ++n) {
    const auto info = fisher(ConjugateCandidate::semicircular(DistributionSpec::standard_semicircular(n)), 6);
    CHECK(info.exact == Scalar(n));
    CHECK(info.value == doctest::Approx(n));
  }
  const auto scaled = fisher(ConjugateCandidate::semicircular(DistributionSpec::semicircular({mpq_class(4, 3)})), 6);
  CHECK(scaled.exact == Scalar(mpq_class(3, 4)));

  const DistributionSpec spec = DistributionSpec::standard_semicircular(1);
  try {
    fisher(ConjugateCandidate({Z(1, {1}, 2)}, TraceFunctional(spec)), 4);
    FAIL("expected ConjugateCheckFailed");
  } catch (const ConjugateCheckFailed& e) {
    CHECK(!e.report().passed());
    CHECK(std::string(e.what()).find("not determined") != std::string::npos);
  }
}
