#include <doctest.h>

#include <cmath>
#include <thread>

#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/trace.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ncfree;
using ncfree::testing::Z;

namespace {

std::vector<mpq_class> q(std::initializer_list<long> v) {
  std::vector<mpq_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Moments of a discrete law with rational atoms, so every table is a genuine distribution.
std::vector<mpq_class> discrete_moments(const std::vector<mpq_class>& atoms, const std::vector<mpq_class>& weights,
                                        int D) {
  std::vector<mpq_class> m;
  for (int k = 1; k <= D; ++k) {
    mpq_class s = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      mpq_class pw = 1;
      for (int e = 0; e < k; ++e) pw *= atoms[a];
      s += weights[a] * pw;
    }
    m.push_back(s);
  }
  return m;
}

TensorPoly2 T(const NcPoly& a, const NcPoly& b) { return TensorPoly2::simple({a, b}); }

}  // namespace

TEST_CASE("moment examples") {
  const TraceFunctional one(DistributionSpec::standard_semicircular(1));
  CHECK(one.moment(Word{1, 1, 1, 1}) == Scalar(2));
  CHECK(one.moment(Word{}) == Scalar(1));
  const TraceFunctional two(DistributionSpec::standard_semicircular(2));
  CHECK(two.moment(Word{1, 2, 1, 2}) == Scalar(0));
  CHECK(two.moment(Word{1, 2, 2, 1}) == Scalar(1));
  CHECK_THROWS_AS(two.moment(Word(std::vector<int>(13, 1))), DegreeBoundExceeded);
  const TraceFunctional scaled(DistributionSpec::semicircular({mpq_class(1, 2), mpq_class(3)}));
  CHECK(scaled.moment(Word{1, 1, 2, 2}) == Scalar(mpq_class(3, 2)));
  CHECK(scaled.moment(Word{1, 1, 1, 1}) == Scalar(mpq_class(1, 2)));
  CHECK_THROWS_AS(DistributionSpec::semicircular({mpq_class(0)}), DomainError);
}

TEST_CASE("free cumulants") {
  const auto k1 = free_cumulants(q({0, 1, 0, 2, 0, 5, 0, 14}));
  CHECK(k1 == q({0, 1, 0, 0, 0, 0, 0, 0}));
  const mpq_class c(3, 2);
  std::vector<mpq_class> point;
  mpq_class pw = 1;
  for (int k = 0; k < 6; ++k) point.push_back(pw *= c);
  const auto k2 = free_cumulants(point);
  CHECK(k2[0] == c);
  for (std::size_t k = 1; k < k2.size(); ++k) CHECK(k2[k] == 0);
  CHECK(free_cumulants(q({0, 1, 0, 1})) == q({0, 1, 0, -1}));

  ncfree::testing::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<mpq_class> m;
    for (int k = 0; k < 7; ++k) m.emplace_back(ncfree::testing::uniform_int(rng, -5, 5), ncfree::testing::uniform_int(rng, 1, 4));
    for (auto& x : m) x.canonicalize();
    CHECK(free_cumulants(m) == oracle::cumulants(m));
  }
}

TEST_CASE("trace, partial traces and contractions") {
  const int n = 2;
  const TraceFunctional t(DistributionSpec::standard_semicircular(n));
  const NcPoly one = NcPoly::constant(n, 1);
  CHECK(trace_tensor(t, TensorPoly2::unit(n)) == Scalar(1));
  CHECK(trace_tensor(t, d(1, Z(n, {1, 1}))) == Scalar(0));
  CHECK(trace_poly(t, Z(n, {1, 2, 1, 2}) - Z(n, {1, 1, 2, 2})) == Scalar(-1));

  CHECK(partial_trace(t, T(Z(n, {1}), Z(n, {1, 1})), Side::Right) == Z(n, {1}));
  const NcPoly p = Z(n, {2, 1}, 3) + one;
  CHECK(partial_trace(t, T(one, p), Side::Left) == p);
  CHECK(partial_trace(t, d(2, Z(n, {1, 2, 1})), Side::Right).is_zero());

  const NcPoly a = Z(n, {2, 2}) + Z(n, {1}), c = Z(n, {1, 2});
  CHECK(contract_middle(t, TensorPoly3::simple({a, one, c})) == T(a, c));
  CHECK(collapse_middle(t, TensorPoly3::simple({a, one, c})) == a * c);
  CHECK(collapse_middle(t, TensorPoly3::simple({Z(n, {1}), Z(n, {1}), Z(n, {2})})).is_zero());
  CHECK(contract_middle(t, TensorPoly3::simple({Z(n, {1}), Z(n, {1, 1}), Z(n, {2})})) == T(Z(n, {1}), Z(n, {2})));
  CHECK(collapse_middle(t, TensorPoly3::simple({Z(n, {1}), Z(n, {1, 1}), Z(n, {2})})) == Z(n, {1, 2}));
}

TEST_CASE("inner products and norms") {
  const int n = 2;
  const TraceFunctional t(DistributionSpec::standard_semicircular(n));
  CHECK(inner(t, Z(n, {1}), Z(n, {1})) == Scalar(1));
  CHECK(inner(t, NcPoly::constant(n, 1), NcPoly::constant(n, 1)) == Scalar(1));
  CHECK(inner(t, Z(n, {1, 2}), Z(n, {2, 1})) == Scalar(0));
  CHECK(norm2(t, Z(n, {1, 1}) - NcPoly::constant(n, 1)) == doctest::Approx(1.0));
  CHECK(inner2(t, TensorPoly2::unit(n), TensorPoly2::unit(n)) == Scalar(1));
  CHECK(norm2_squared(t, T(Z(n, {1}), Z(n, {2, 2}))) == mpq_class(2));

  // a table that is not a moment sequence: tau(Z1^2) = -1
  std::map<Word, Scalar> bad = {{Word{1}, Scalar(0)}, {Word{1, 1}, Scalar(-1)}};
  const TraceFunctional tb(DistributionSpec::explicit_moments(1, bad, 2));
  CHECK_THROWS_AS(norm2(tb, Z(1, {1})), NotPositive);
}

TEST_CASE("opnorm_lower") {
  const int n = 1;
  const TraceFunctional t(DistributionSpec::standard_semicircular(n));
  for (int k = 1; k <= 6; ++k) CHECK(opnorm_lower(t, NcPoly::constant(n, 1), k) == doctest::Approx(1.0));
  CHECK(opnorm_lower(t, Z(n, {1}), 2) == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(opnorm_lower(t, NcPoly::constant(n, Scalar(mpq_class(-3, 2), 2)), 3) == doctest::Approx(2.5));
  CHECK_THROWS_AS(opnorm_lower(t, Z(n, {1, 1}), 4), DegreeBoundExceeded);
  double prev = 0;
  for (int k = 1; k <= 6; ++k) {
    const double v = opnorm_lower(t, Z(n, {1}), k);
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 2.0);
    prev = v;
  }
}

TEST_CASE("explicit moment tables") {
  std::map<Word, Scalar> table = {{Word{1, 2}, Scalar(mpq_class(1, 3), 1)}, {Word{1, 1, 2}, Scalar(5)}};
  const TraceFunctional t(DistributionSpec::explicit_moments(2, table, 3));
  CHECK(t.moment(Word{1, 2}) == Scalar(mpq_class(1, 3), 1));
  CHECK(t.moment(Word{2, 1}) == Scalar(mpq_class(1, 3), 1));  // rotation
  CHECK(t.moment(Word{1, 2, 1}) == Scalar(5));                // rotation of 1 1 2
  CHECK(t.moment(Word{2, 1, 1}) == Scalar(5));
  CHECK_THROWS_AS(t.moment(Word{2, 2}), DomainError);
  CHECK_THROWS_AS(t.moment(Word{1, 1, 1, 1}), DegreeBoundExceeded);
  CHECK_THROWS_AS(DistributionSpec::explicit_moments(1, {{Word{2}, Scalar(1)}}, 2), GeneratorMismatch);
}

TEST_CASE("oracle: moments over all partitions with a crossing filter") {
  std::vector<std::vector<oracle::Partition>> nc(9);
  for (int k = 0; k <= 8; ++k) nc[static_cast<std::size_t>(k)] = oracle::noncrossing_partitions(k);
  CHECK(nc[8].size() == 1430);

  SUBCASE("semicircular families") {
    for (int n = 1; n <= 3; ++n) {
      std::vector<mpq_class> vars;
      for (int j = 1; j <= n; ++j) vars.emplace_back(j, 2);
      const TraceFunctional t(DistributionSpec::semicircular(vars));
      std::vector<std::vector<mpq_class>> kappa;
      for (const auto& v : vars) kappa.push_back({0, v});
      for (const auto& w : words_up_to(n, 8)) {
        CHECK(t.moment(w) == Scalar(oracle::free_moment(w, kappa, nc[w.size()])));
      }
    }
  }
  SUBCASE("free families of discrete laws") {
    const std::vector<std::vector<mpq_class>> laws_atoms = {{-1, 2}, {0, 1, 3}, {mpq_class(1, 2)}};
    const std::vector<std::vector<mpq_class>> laws_weights = {
        {mpq_class(2, 3), mpq_class(1, 3)}, {mpq_class(1, 4), mpq_class(1, 4), mpq_class(1, 2)}, {1}};
    std::vector<std::vector<mpq_class>> moments, kappa;
    for (std::size_t g = 0; g < 3; ++g) {
      moments.push_back(discrete_moments(laws_atoms[g], laws_weights[g], 8));
      kappa.push_back(oracle::cumulants(moments.back()));
    }
    const TraceFunctional t(DistributionSpec::free_family(moments));
    CHECK(t.degree_bound() == 8);
    for (const auto& w : words_up_to(3, 8)) {
      CHECK(t.moment(w) == Scalar(oracle::free_moment(w, kappa, nc[w.size()])));
    }
  }
}

TEST_CASE("property: unital, tracial, *-compatible, positive, faithful") {
  ncfree::testing::Rng rng(32);
  const TraceFunctional semi(DistributionSpec::semicircular({1, mpq_class(2, 3)}));
  const TraceFunctional fam(DistributionSpec::free_family({discrete_moments({-1, 2}, {mpq_class(1, 2), mpq_class(1, 2)}, 10),
                                                           {0, 1, 0, 2, 0, 5, 0, 14, 0, 42}}));
  for (const TraceFunctional* t : {&semi, &fam}) {
    CHECK(trace_poly(*t, NcPoly::constant(2, 1)) == Scalar(1));
    for (int trial = 0; trial < 80; ++trial) {
      const NcPoly p = ncfree::testing::random_poly(rng, 2, 4), q2 = ncfree::testing::random_poly(rng, 2, 4);
      CHECK(trace_poly(*t, p * q2) == trace_poly(*t, q2 * p));
      CHECK(trace_poly(*t, star(p)) == trace_poly(*t, p).conj());
      const Scalar pp = inner(*t, p, p);
      CHECK(pp.is_real());
      CHECK(sgn(pp.re()) >= 0);
      // faithful on polynomials for semicircular families; the two-atom law is not
      if (t == &semi) CHECK(sgn(pp.re()) > 0);
    }
  }
}

TEST_CASE("memo is shared by copies and safe under concurrent use") {
  const TraceFunctional t(DistributionSpec::standard_semicircular(3));
  const TraceFunctional copy = t;  // NOLINT(performance-unnecessary-copy-initialization)
  const auto words = words_up_to(3, 6);
  std::vector<Scalar> serial;
  {
    const TraceFunctional fresh(DistributionSpec::standard_semicircular(3));
    for (const auto& w : words) serial.push_back(fresh.moment(w));
  }
  std::vector<std::vector<Scalar>> results(4, std::vector<Scalar>(words.size()));
  std::vector<std::thread> pool;
  for (std::size_t th = 0; th < 4; ++th) {
    pool.emplace_back([&, th] {
      const TraceFunctional& use = th % 2 ? t : copy;
      for (std::size_t k = 0; k < words.size(); ++k) {
        const std::size_t idx = (k + th * 97) % words.size();
        results[th][idx] = use.moment(words[idx]);
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& r : results) CHECK(r == serial);
  CHECK(t.memo_size() == copy.memo_size());
  CHECK(t.memo_size() >= words.size() - 1);
}
