#include "ncfree/reduction.hpp"

#include <string>

#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/parallel.hpp"
#include "ncfree/tensor.hpp"

namespace ncfree {

ProjectionSurrogate make_projection(const TraceFunctional& t, NcPoly p) {
  if (!p.is_self_adjoint()) throw DomainError("projection surrogate must be self-adjoint: " + p.str());
  Scalar weight = trace_poly(t, p);
  return ProjectionSurrogate{std::move(p), std::move(weight)};
}

NcPoly delta(const TraceFunctional& t, Word::Letter j, const NcPoly& p) {
  return partial_trace(t, d(j, p), Side::Left);
}

NcPoly delta_p(const TraceFunctional& t, const ProjectionSurrogate& proj, Word::Letter j, const NcPoly& p) {
  const NcPoly one = NcPoly::constant(p.num_generators(), 1);
  return partial_trace(t, bimodule_mul(proj.p, d(j, p), one), Side::Left);
}

NcPoly iterated_delta_p(const TraceFunctional& t, const std::vector<ProjectionSurrogate>& projections,
                        const Word& word, const NcPoly& p) {
  if (projections.size() != word.size()) throw DomainError("need one projection per letter");
  NcPoly cur = p;
  for (std::size_t k = 0; k < word.size(); ++k) cur = delta_p(t, projections[k], word[k], cur);
  return cur;
}

Scalar extract_leading_coeff(const TraceFunctional& t, const NcPoly& p, const Word& word) {
  const int deg = total_degree(p);
  if (deg == kZeroPolyDegree || static_cast<int>(word.size()) != deg) {
    throw DomainError("extract_leading_coeff: word length " + std::to_string(word.size()) +
                      " differs from total degree of " + p.str());
  }
  NcPoly cur = p;
  for (Word::Letter j : word) cur = delta(t, j, cur);
  return cur.coeff(Word());
}

namespace {

std::size_t bit_size(const Scalar& s) {
  return mpz_sizeinbase(s.re().get_num_mpz_t(), 2) + mpz_sizeinbase(s.re().get_den_mpz_t(), 2) +
         mpz_sizeinbase(s.im().get_num_mpz_t(), 2) + mpz_sizeinbase(s.im().get_den_mpz_t(), 2);
}

// Null space of a square matrix by Gauss-Jordan elimination with full pivoting; the pivot is the
// nonzero entry of the remaining block with the smallest bit size.
std::vector<std::vector<Scalar>> null_space(std::vector<std::vector<Scalar>> a) {
  const std::size_t m = a.size();
  std::vector<std::size_t> col(m);
  for (std::size_t k = 0; k < m; ++k) col[k] = k;
  std::size_t rank = 0;
  for (; rank < m; ++rank) {
    std::size_t best_r = m, best_c = m, best_size = 0;
    for (std::size_t r = rank; r < m; ++r)
      for (std::size_t c = rank; c < m; ++c) {
        const Scalar& v = a[r][col[c]];
        if (v.is_zero()) continue;
        const std::size_t sz = bit_size(v);
        if (best_r == m || sz < best_size) {
          best_r = r;
          best_c = c;
          best_size = sz;
        }
      }
    if (best_r == m) break;
    std::swap(a[rank], a[best_r]);
    std::swap(col[rank], col[best_c]);
    const Scalar pivot = a[rank][col[rank]];
    for (auto& v : a[rank]) v /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank) continue;
      const Scalar factor = a[r][col[rank]];
      if (factor.is_zero()) continue;
      for (std::size_t c = 0; c < m; ++c)
        if (!a[rank][c].is_zero()) a[r][c] -= factor * a[rank][c];
    }
  }
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t f = rank; f < m; ++f) {
    std::vector<Scalar> x(m);
    x[col[f]] = 1;
    for (std::size_t r = 0; r < rank; ++r) x[col[r]] = -a[r][col[f]];
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace

std::vector<NcPoly> relation_kernel(const TraceFunctional& t, int D) {
  if (D < 0) throw DomainError("negative relation degree");
  if (2 * D > t.degree_bound()) {
    throw DegreeBoundExceeded("relation_kernel at degree " + std::to_string(D) + " needs moments of length " +
                              std::to_string(2 * D) + " > bound " + std::to_string(t.degree_bound()));
  }
  const int n = t.num_generators();
  const std::vector<Word> words = words_up_to(n, static_cast<std::size_t>(D));
  const std::size_t m = words.size();

  std::vector<std::vector<Scalar>> gram(m, std::vector<Scalar>(m));
  parallel_for(m, [&](std::size_t r) {
    for (std::size_t c = 0; c < m; ++c) gram[r][c] = t.moment(words[r] + words[c].reversed());
  });

  // G v = 0 means P = sum conj(v_w) w has tau(P P*) = 0
  std::vector<NcPoly> out;
  for (const auto& v : null_space(std::move(gram))) {
    NcPoly::Terms terms;
    for (std::size_t k = 0; k < m; ++k)
      if (!v[k].is_zero()) terms.emplace(words[k], v[k].conj());
    NcPoly p(n, std::move(terms));
    const Scalar lead = p.terms().rbegin()->second;
    out.push_back(p * (Scalar(1) / lead));
  }
  return out;
}

}  // namespace ncfree
