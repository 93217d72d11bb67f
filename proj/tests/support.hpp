#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ncfree/ncpoly.hpp"
#include "ncfree/tensor.hpp"

namespace ncfree::testing {

// Hand-rolled generators for property tests. Every generator takes the engine by reference
// so a failing case can be replayed from its seed.
using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Scalar small_scalar(Rng& rng, bool complex = true) {
  const mpq_class re(uniform_int(rng, -4, 4), uniform_int(rng, 1, 3));
  const mpq_class im = complex && uniform_int(rng, 0, 2) == 0 ? mpq_class(uniform_int(rng, -3, 3), uniform_int(rng, 1, 2))
                                                             : mpq_class(0);
  Scalar s(re, im);
  return s.is_zero() ? Scalar(1) : s;
}

inline Word random_word(Rng& rng, int n, int min_len, int max_len) {
  const int len = uniform_int(rng, min_len, max_len);
  std::vector<Word::Letter> letters;
  for (int k = 0; k < len; ++k) letters.push_back(uniform_int(rng, 1, n));
  return Word(std::move(letters));
}

inline NcPoly random_poly(Rng& rng, int n, int max_deg, int max_terms = 5, bool complex = true) {
  NcPoly p(n);
  const int terms = uniform_int(rng, 1, max_terms);
  for (int t = 0; t < terms; ++t) p += NcPoly::monomial(n, random_word(rng, n, 0, max_deg), small_scalar(rng, complex));
  return p;
}

/// Random polynomial with a term of exactly length max_deg.
inline NcPoly random_poly_exact(Rng& rng, int n, int deg, int max_terms = 5) {
  NcPoly p = random_poly(rng, n, deg, max_terms);
  p += NcPoly::monomial(n, random_word(rng, n, deg, deg), small_scalar(rng));
  if (total_degree(p) != deg) p += NcPoly::monomial(n, random_word(rng, n, deg, deg), 1);
  return p;
}

inline NcPoly random_self_adjoint(Rng& rng, int n, int max_deg, int max_terms = 4) {
  const NcPoly p = random_poly(rng, n, max_deg, max_terms);
  return p + star(p);
}

inline TensorPoly2 random_tensor(Rng& rng, int n, int max_deg, int max_terms = 4) {
  TensorPoly2 s(n);
  const int terms = uniform_int(rng, 1, max_terms);
  for (int t = 0; t < terms; ++t) {
    s.add_term({random_word(rng, n, 0, max_deg), random_word(rng, n, 0, max_deg)}, small_scalar(rng));
  }
  return s;
}

inline NcPoly Z(int n, std::initializer_list<Word::Letter> letters, Scalar c = 1) {
  return NcPoly::monomial(n, Word(letters), c);
}

}  // namespace ncfree::testing
