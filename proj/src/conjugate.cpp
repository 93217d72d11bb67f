#include "ncfree/conjugate.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "ncfree/derivations.hpp"
#include "ncfree/parallel.hpp"

namespace ncfree {

ConjugateCandidate::ConjugateCandidate(std::vector<NcPoly> xi_in, TraceFunctional trace_in)
    : xi(std::move(xi_in)), trace(std::move(trace_in)) {
  const int n = trace.num_generators();
  if (static_cast<int>(xi.size()) != n) {
    throw GeneratorMismatch("conjugate candidate has " + std::to_string(xi.size()) + " entries for " +
                            std::to_string(n) + " generators");
  }
  for (const auto& x : xi) detail::check_same_n(n, x.num_generators(), "conjugate candidate");
}

ConjugateCandidate ConjugateCandidate::semicircular(const DistributionSpec& spec) {
  const auto* fam = std::get_if<SemicircularFamily>(&spec.family);
  if (!fam) throw DomainError("semicircular candidate requested for a non-semicircular spec");
  std::vector<NcPoly> xi;
  for (int j = 1; j <= spec.n; ++j) {
    const mpq_class inv = 1 / fam->variances[static_cast<std::size_t>(j - 1)];
    xi.push_back(NcPoly::generator(spec.n, j) * Scalar(inv));
  }
  return ConjugateCandidate(std::move(xi), TraceFunctional(spec));
}

int ConjugateCandidate::max_degree() const {
  int d = 0;
  for (const auto& x : xi) d = std::max(d, total_degree(x));
  return d;
}

VerificationReport check_conjugate(const ConjugateCandidate& c, int D) {
  if (D < 0) throw DomainError("negative verification degree");
  const int n = c.num_generators();
  if (D + c.max_degree() > c.trace.degree_bound()) {
    throw DegreeBoundExceeded("check_conjugate at degree " + std::to_string(D) + " needs moments of length " +
                              std::to_string(D + c.max_degree()) + " > bound " +
                              std::to_string(c.trace.degree_bound()));
  }
  const std::vector<Word> words = words_up_to(n, static_cast<std::size_t>(D));

  // one slot per (j, word) keeps the merged report independent of scheduling
  const std::size_t total = words.size() * static_cast<std::size_t>(n);
  std::vector<std::optional<ConjugateFailure>> slots(total);
  parallel_for(total, [&](std::size_t idx) {
    const auto j = static_cast<Word::Letter>(idx / words.size() + 1);
    const Word& w = words[idx % words.size()];
    const NcPoly p = NcPoly::monomial(n, w);
    Scalar lhs = trace_tensor(c.trace, d(j, p));
    Scalar rhs = trace_poly(c.trace, c[j] * p);
    if (!(lhs == rhs)) slots[idx] = ConjugateFailure{j, w, std::move(lhs), std::move(rhs)};
  });

  VerificationReport report;
  report.max_degree_checked = D;
  report.words_checked = words.size();
  for (auto& s : slots)
    if (s) report.failures.push_back(std::move(*s));
  for (int j = 1; j <= n; ++j)
    if (!c[j].is_self_adjoint()) report.not_self_adjoint.push_back(j);
  return report;
}

NcPoly dstar(const ConjugateCandidate& c, Word::Letter j, const TensorPoly2& y) {
  return collapse(c[j], y) - collapse_middle(c.trace, d_leg_sum(j, y));
}

bool check_adjoint(const ConjugateCandidate& c, Word::Letter j, const TensorPoly2& y, const NcPoly& q) {
  return inner(c.trace, dstar(c, j, y), q) == inner2(c.trace, y, d(j, q));
}

DualitySides duality_sides(const TraceFunctional& t, const NcPoly& p1, const NcPoly& p2, Word::Letter i) {
  const int n = p1.num_generators();
  const NcPoly one = NcPoly::constant(n, 1);
  DualitySides sides;
  sides.lhs = star(partial_trace(t, bimodule_mul(p1, d(i, p2), one), Side::Left));
  sides.rhs = partial_trace(t, bimodule_mul(one, d(i, star(p2)), star(p1)), Side::Right);
  return sides;
}

bool check_duality(const TraceFunctional& t, const NcPoly& p1, const NcPoly& p2, Word::Letter i) {
  const auto sides = duality_sides(t, p1, p2, i);
  return sides.lhs == sides.rhs;
}

double DabrowskiMargins::min_margin() const {
  return std::min({margin_right(), margin_left(), margin_partial_right(), margin_partial_left()});
}

DabrowskiMargins dabrowski_margins_with_norm(const ConjugateCandidate& c, Word::Letter j, const NcPoly& p,
                                             double opnorm) {
  const auto& t = c.trace;
  const TensorPoly2 dp = d(j, p);
  const NcPoly right_partial = partial_trace(t, dp, Side::Right);  // (id (x) tau)(d_j P)
  const NcPoly left_partial = partial_trace(t, dp, Side::Left);    // (tau (x) id)(d_j P)

  DabrowskiMargins m;
  m.xi_norm = norm2(t, c[j]);
  m.opnorm = opnorm;
  m.lhs_right = norm2(t, p * c[j] - right_partial);
  m.lhs_left = norm2(t, c[j] * p - left_partial);
  m.lhs_partial_right = norm2(t, right_partial);
  m.lhs_partial_left = norm2(t, left_partial);
  m.bound = m.xi_norm * opnorm;
  return m;
}

DabrowskiMargins dabrowski_margins(const ConjugateCandidate& c, Word::Letter j, const NcPoly& p, int k) {
  return dabrowski_margins_with_norm(c, j, p, opnorm_lower(c.trace, p, k));
}

FisherInformation fisher(const ConjugateCandidate& c, int D) {
  VerificationReport report = check_conjugate(c, D);
  if (!report.passed()) {
    const auto& f = report.failures.front();
    throw ConjugateCheckFailed("conjugate relations fail (first at j=" + std::to_string(f.j) + ", word " +
                                   f.word.str() + ": " + f.lhs.str() + " vs " + f.rhs.str() +
                                   "); free Fisher information not determined up to degree " +
                                   std::to_string(D),
                               std::move(report));
  }
  FisherInformation info;
  for (const auto& x : c.xi) info.exact += Scalar(norm2_squared(c.trace, x));
  info.value = info.exact.re().get_d();
  info.degree_checked = D;
  return info;
}

}  // namespace ncfree
