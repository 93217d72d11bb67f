#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "ncfree/ncpoly.hpp"

namespace ncfree {

/// Sparse element of the algebraic tensor power C<Z>^{(x)Legs}, keyed on one word per leg.
template <std::size_t Legs>
class TensorPoly {
 public:
  using Key = std::array<Word, Legs>;
  using Terms = std::map<Key, Scalar>;

  explicit TensorPoly(int n = 0) : n_(n) {}
  TensorPoly(int n, Terms terms);

  /// Simple tensor a (x) b (x) ... built from polynomials.
  static TensorPoly simple(const std::array<NcPoly, Legs>& legs);
  static TensorPoly unit(int n) {
    Terms t;
    t.emplace(Key{}, Scalar(1));
    return TensorPoly(n, std::move(t));
  }

  int num_generators() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Key& k) const;

  void add_term(const Key& k, const Scalar& c);

  TensorPoly& operator+=(const TensorPoly& o);
  TensorPoly& operator-=(const TensorPoly& o);
  TensorPoly& operator*=(const Scalar& c);
  friend TensorPoly operator+(TensorPoly a, const TensorPoly& b) { return a += b; }
  friend TensorPoly operator-(TensorPoly a, const TensorPoly& b) { return a -= b; }
  friend TensorPoly operator*(TensorPoly a, const Scalar& c) { return a *= c; }
  friend TensorPoly operator*(const Scalar& c, TensorPoly a) { return a *= c; }

  friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// `coeff * (W1 | W2)` per term, joined by " + "; words as in NcPoly ("1" for the unit).
  std::string str() const;
  static TensorPoly parse(std::string_view text, int n);

 private:
  int n_ = 0;
  Terms terms_;
};

using TensorPoly2 = TensorPoly<2>;
using TensorPoly3 = TensorPoly<3>;

extern template class TensorPoly<2>;
extern template class TensorPoly<3>;

/// Componentwise product (a (x) b)(c (x) d) = ac (x) bd.
TensorPoly2 operator*(const TensorPoly2& s, const TensorPoly2& t);

/// (a1 (x) a2) # (b1 (x) b2) = a1 b1 (x) b2 a2.
TensorPoly2 sharp(const TensorPoly2& s, const TensorPoly2& t);
/// sigma(a (x) b) = b (x) a.
TensorPoly2 flip(const TensorPoly2& s);
/// (a (x) b)* = a* (x) b*.
TensorPoly2 tensor_star(const TensorPoly2& s);
/// (lp (x) 1) s (1 (x) rq).
TensorPoly2 bimodule_mul(const NcPoly& lp, const TensorPoly2& s, const NcPoly& rq);
/// m_eta(a (x) b) = a eta b, linearly extended. collapse(1, s) is the multiplication map m_1.
NcPoly collapse(const NcPoly& eta, const TensorPoly2& s);

}  // namespace ncfree
