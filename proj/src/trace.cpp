#include "ncfree/trace.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <string>

#include "ncfree/errors.hpp"

namespace ncfree {

DistributionSpec DistributionSpec::semicircular(std::vector<mpq_class> variances, int degree_bound) {
  for (const auto& v : variances)
    if (sgn(v) <= 0) throw DomainError("semicircular variances must be positive");
  DistributionSpec s;
  s.n = static_cast<int>(variances.size());
  s.family = SemicircularFamily{std::move(variances)};
  s.degree_bound = degree_bound;
  return s;
}

DistributionSpec DistributionSpec::standard_semicircular(int n, int degree_bound) {
  return semicircular(std::vector<mpq_class>(static_cast<std::size_t>(n), mpq_class(1)), degree_bound);
}

DistributionSpec DistributionSpec::free_family(std::vector<std::vector<mpq_class>> moments,
                                               int degree_bound) {
  DistributionSpec s;
  s.n = static_cast<int>(moments.size());
  s.family = FreeFamily{std::move(moments)};
  s.degree_bound = degree_bound;
  return s;
}

DistributionSpec DistributionSpec::explicit_moments(int n, std::map<Word, Scalar> table, int degree_bound) {
  for (const auto& [w, v] : table) detail::check_letters(n, w);
  DistributionSpec s;
  s.n = n;
  s.family = ExplicitMoments{std::move(table), degree_bound};
  s.degree_bound = degree_bound;
  return s;
}

std::vector<mpq_class> free_cumulants(const std::vector<mpq_class>& moments) {
  const std::size_t D = moments.size();
  // series M(z) = 1 + sum m_i z^i, and its powers truncated at z^D
  std::vector<mpq_class> series(D + 1);
  series[0] = 1;
  for (std::size_t i = 1; i <= D; ++i) series[i] = moments[i - 1];
  auto times = [D](const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    std::vector<mpq_class> out(D + 1);
    for (std::size_t i = 0; i <= D; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; i + j <= D; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  };
  std::vector<std::vector<mpq_class>> powers{series};  // powers[s-1] = M^s
  std::vector<mpq_class> kappa(D);
  // m_k = sum_{s=1}^{k} kappa_s [z^{k-s}] M(z)^s
  for (std::size_t k = 1; k <= D; ++k) {
    mpq_class acc = moments[k - 1];
    for (std::size_t s = 1; s < k; ++s) acc -= kappa[s - 1] * powers[s - 1][k - s];
    kappa[k - 1] = acc;
    if (powers.size() < k) powers.push_back(times(powers.back(), series));
  }
  return kappa;
}

namespace {

// Sum over non-crossing partitions of the letter positions whose blocks are monochromatic,
// weighted by the product of the colour's free cumulants. Built block-first: the block holding
// position i splits the rest of the interval into independent gaps.
class NonCrossingSum {
 public:
  NonCrossingSum(const Word& w, const std::vector<std::vector<mpq_class>>& kappa) : w_(w), kappa_(kappa) {
    const std::size_t L = w.size();
    memo_.assign((L + 1) * (L + 1), std::nullopt);
    max_order_.resize(kappa.size());
    for (std::size_t c = 0; c < kappa.size(); ++c) {
      max_order_[c] = 0;
      for (std::size_t m = 0; m < kappa[c].size(); ++m)
        if (sgn(kappa[c][m]) != 0) max_order_[c] = m + 1;
    }
  }

  mpq_class interval(std::size_t i, std::size_t j) {
    if (i == j) return 1;
    auto& slot = memo_[i * (w_.size() + 1) + j];
    if (slot) return *slot;
    const auto colour = static_cast<std::size_t>(w_[i] - 1);
    mpq_class value = extend(colour, i, 1, j);
    slot = value;
    return value;
  }

 private:
  mpq_class extend(std::size_t colour, std::size_t last, std::size_t block_size, std::size_t j) {
    mpq_class acc = 0;
    const auto& k = kappa_[colour];
    if (block_size <= k.size() && sgn(k[block_size - 1]) != 0) acc += k[block_size - 1] * interval(last + 1, j);
    if (block_size >= max_order_[colour]) return acc;
    for (std::size_t b = last + 1; b < j; ++b) {
      if (static_cast<std::size_t>(w_[b] - 1) != colour) continue;
      mpq_class gap = interval(last + 1, b);
      if (sgn(gap) == 0) continue;
      acc += gap * extend(colour, b, block_size + 1, j);
    }
    return acc;
  }

  const Word& w_;
  const std::vector<std::vector<mpq_class>>& kappa_;
  std::vector<std::size_t> max_order_;
  std::vector<std::optional<mpq_class>> memo_;
};

std::string word_desc(const Word& w) { return "'" + w.str() + "'"; }

}  // namespace

TraceFunctional::TraceFunctional(DistributionSpec spec) : state_(std::make_shared<State>()) {
  auto& st = *state_;
  st.spec = std::move(spec);
  const int n = st.spec.n;
  if (n < 1) throw DomainError("distribution needs at least one generator");
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, SemicircularFamily>) {
          if (static_cast<int>(fam.variances.size()) != n) throw GeneratorMismatch("variance count != n");
          st.bound = st.spec.degree_bound;
          for (const auto& v : fam.variances) {
            std::vector<mpq_class> k(static_cast<std::size_t>(std::max(st.bound, 2)));
            k[1] = v;
            st.cumulants.push_back(std::move(k));
          }
        } else if constexpr (std::is_same_v<T, FreeFamily>) {
          if (static_cast<int>(fam.moments.size()) != n) throw GeneratorMismatch("moment sequence count != n");
          st.bound = st.spec.degree_bound;
          for (const auto& m : fam.moments) {
            st.bound = std::min(st.bound, static_cast<int>(m.size()));
            st.cumulants.push_back(free_cumulants(m));
          }
        } else {
          st.bound = fam.degree_bound;
        }
      },
      st.spec.family);
}

std::size_t TraceFunctional::memo_size() const {
  std::shared_lock lock(state_->mutex);
  return state_->memo.size();
}

Scalar TraceFunctional::moment(const Word& w) const {
  if (w.empty()) return 1;
  if (static_cast<int>(w.size()) > state_->bound) {
    throw DegreeBoundExceeded("word of length " + std::to_string(w.size()) + " exceeds degree bound " +
                              std::to_string(state_->bound));
  }
  {
    std::shared_lock lock(state_->mutex);
    auto it = state_->memo.find(w);
    if (it != state_->memo.end()) return it->second;
  }
  Scalar value = compute(w);
  std::unique_lock lock(state_->mutex);
  state_->memo.emplace(w, value);
  return value;
}

Scalar TraceFunctional::compute(const Word& w) const {
  const auto& st = *state_;
  detail::check_letters(st.spec.n, w);
  if (const auto* table = std::get_if<ExplicitMoments>(&st.spec.family)) {
    const std::size_t L = w.size();
    // rotations first; reversal with conjugation only as a fallback
    for (std::size_t r = 0; r < L; ++r)
      if (auto it = table->table.find(w.slice(r, L - r) + w.slice(0, r)); it != table->table.end()) return it->second;
    const Word rev = w.reversed();
    for (std::size_t r = 0; r < L; ++r)
      if (auto it = table->table.find(rev.slice(r, L - r) + rev.slice(0, r)); it != table->table.end())
        return it->second.conj();
    throw DomainError("explicit moment table has no entry for " + word_desc(w));
  }
  NonCrossingSum sum(w, st.cumulants);
  return Scalar(sum.interval(0, w.size()));
}

Scalar trace_poly(const TraceFunctional& t, const NcPoly& p) {
  detail::check_same_n(t.num_generators(), p.num_generators(), "trace");
  Scalar acc;
  for (const auto& [w, c] : p.terms()) acc += c * t.moment(w);
  return acc;
}

Scalar trace_tensor(const TraceFunctional& t, const TensorPoly2& s) {
  detail::check_same_n(t.num_generators(), s.num_generators(), "trace_tensor");
  Scalar acc;
  for (const auto& [k, c] : s.terms()) acc += c * t.moment(k[0]) * t.moment(k[1]);
  return acc;
}

NcPoly partial_trace(const TraceFunctional& t, const TensorPoly2& s, Side contracted) {
  detail::check_same_n(t.num_generators(), s.num_generators(), "partial_trace");
  NcPoly::Terms out;
  const std::size_t traced = contracted == Side::Left ? 0 : 1;
  for (const auto& [k, c] : s.terms()) detail::accumulate(out, k[1 - traced], c * t.moment(k[traced]));
  return NcPoly(s.num_generators(), std::move(out));
}

TensorPoly2 contract_middle(const TraceFunctional& t, const TensorPoly3& y) {
  detail::check_same_n(t.num_generators(), y.num_generators(), "contract_middle");
  TensorPoly2 out(y.num_generators());
  for (const auto& [k, c] : y.terms()) out.add_term({k[0], k[2]}, c * t.moment(k[1]));
  return out;
}

NcPoly collapse_middle(const TraceFunctional& t, const TensorPoly3& y) {
  detail::check_same_n(t.num_generators(), y.num_generators(), "collapse_middle");
  NcPoly::Terms out;
  for (const auto& [k, c] : y.terms()) detail::accumulate(out, k[0] + k[2], c * t.moment(k[1]));
  return NcPoly(y.num_generators(), std::move(out));
}

Scalar inner(const TraceFunctional& t, const NcPoly& p, const NcPoly& q) {
  return trace_poly(t, p * star(q));
}

Scalar inner2(const TraceFunctional& t, const TensorPoly2& s, const TensorPoly2& u) {
  return trace_tensor(t, s * tensor_star(u));
}

namespace {

mpq_class checked_self_pairing(const Scalar& v, const std::string& what) {
  if (!v.is_real() || sgn(v.re()) < 0) {
    throw NotPositive("self-pairing of " + what + " is " + v.str() +
                      "; the moment data does not define a positive trace");
  }
  return v.re();
}

}  // namespace

mpq_class norm2_squared(const TraceFunctional& t, const NcPoly& p) {
  return checked_self_pairing(inner(t, p, p), "'" + p.str() + "'");
}

double norm2(const TraceFunctional& t, const NcPoly& p) { return std::sqrt(norm2_squared(t, p).get_d()); }

mpq_class norm2_squared(const TraceFunctional& t, const TensorPoly2& s) {
  return checked_self_pairing(inner2(t, s, s), "'" + s.str() + "'");
}

double norm2(const TraceFunctional& t, const TensorPoly2& s) { return std::sqrt(norm2_squared(t, s).get_d()); }

double opnorm_lower(const TraceFunctional& t, const NcPoly& p, int k) {
  if (k < 1) throw DomainError("opnorm_lower needs k >= 1");
  if (p.is_zero()) return 0.0;
  const int needed = 2 * k * total_degree(p);
  if (needed > t.degree_bound()) {
    throw DegreeBoundExceeded("opnorm_lower needs degree " + std::to_string(needed) + " > bound " +
                              std::to_string(t.degree_bound()));
  }
  const Scalar v = trace_poly(t, power(star(p) * p, k));
  const mpq_class m = checked_self_pairing(v, "(p* p)^k");
  return std::pow(m.get_d(), 1.0 / (2.0 * k));
}

}  // namespace ncfree
