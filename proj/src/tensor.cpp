#include "ncfree/tensor.hpp"

#include "ncfree/errors.hpp"
#include "text_cursor.hpp"

namespace ncfree {

template <std::size_t Legs>
TensorPoly<Legs>::TensorPoly(int n, Terms terms) : n_(n) {
  for (auto& [k, c] : terms) {
    for (const Word& w : k) detail::check_letters(n, w);
    if (!c.is_zero()) terms_.emplace(k, std::move(c));
  }
}

template <std::size_t Legs>
TensorPoly<Legs> TensorPoly<Legs>::simple(const std::array<NcPoly, Legs>& legs) {
  const int n = legs[0].num_generators();
  for (const auto& leg : legs) detail::check_same_n(n, leg.num_generators(), "simple tensor");
  TensorPoly out(n);
  // iterate over the cartesian product of the legs' terms
  std::array<typename NcPoly::Terms::const_iterator, Legs> it;
  for (std::size_t l = 0; l < Legs; ++l) {
    if (legs[l].is_zero()) return out;
    it[l] = legs[l].terms().begin();
  }
  while (true) {
    Key key;
    Scalar c(1);
    for (std::size_t l = 0; l < Legs; ++l) {
      key[l] = it[l]->first;
      c *= it[l]->second;
    }
    out.add_term(key, c);
    std::size_t l = Legs;
    while (l > 0) {
      --l;
      if (++it[l] != legs[l].terms().end()) break;
      it[l] = legs[l].terms().begin();
      if (l == 0) return out;
    }
  }
}

template <std::size_t Legs>
Scalar TensorPoly<Legs>::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar() : it->second;
}

template <std::size_t Legs>
void TensorPoly<Legs>::add_term(const Key& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

template <std::size_t Legs>
TensorPoly<Legs>& TensorPoly<Legs>::operator+=(const TensorPoly& o) {
  detail::check_same_n(n_, o.n_, "tensor add");
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

template <std::size_t Legs>
TensorPoly<Legs>& TensorPoly<Legs>::operator-=(const TensorPoly& o) {
  detail::check_same_n(n_, o.n_, "tensor sub");
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

template <std::size_t Legs>
TensorPoly<Legs>& TensorPoly<Legs>::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

template <std::size_t Legs>
std::string TensorPoly<Legs>::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += c.str();
    out += " * (";
    for (std::size_t l = 0; l < Legs; ++l) {
      if (l) out += " | ";
      out += k[l].str();
    }
    out += ')';
  }
  return out;
}

template <std::size_t Legs>
TensorPoly<Legs> TensorPoly<Legs>::parse(std::string_view text, int n) {
  detail::TextCursor cur(text);
  TensorPoly out(n);
  cur.skip_space();
  if (cur.done()) throw ParseError("empty tensor text");
  {
    const auto b = text.find_first_not_of(" \t\n");
    const auto e = text.find_last_not_of(" \t\n");
    if (text.substr(b, e - b + 1) == "0") return out;
  }
  bool first = true;
  while (true) {
    cur.skip_space();
    if (cur.done()) break;
    Scalar sign(1);
    if (!first) {
      if (cur.consume('+')) {
      } else if (cur.consume('-')) {
        sign = Scalar(-1);
      } else {
        cur.fail("expected '+' or '-' between tensor terms");
      }
    }
    first = false;
    cur.skip_space();
    Scalar coeff(1);
    if (cur.peek() != '(') {
      coeff = cur.scalar();
      cur.expect('*');
    }
    cur.expect('(');
    Key key;
    for (std::size_t l = 0; l < Legs; ++l) {
      if (l) cur.expect('|');
      key[l] = detail::read_word(cur);
      detail::check_letters(n, key[l]);
    }
    cur.expect(')');
    out.add_term(key, sign * coeff);
  }
  return out;
}

template class TensorPoly<2>;
template class TensorPoly<3>;

TensorPoly2 operator*(const TensorPoly2& s, const TensorPoly2& t) {
  detail::check_same_n(s.num_generators(), t.num_generators(), "tensor mul");
  TensorPoly2 out(s.num_generators());
  for (const auto& [ks, cs] : s.terms())
    for (const auto& [kt, ct] : t.terms()) out.add_term({ks[0] + kt[0], ks[1] + kt[1]}, cs * ct);
  return out;
}

TensorPoly2 sharp(const TensorPoly2& s, const TensorPoly2& t) {
  detail::check_same_n(s.num_generators(), t.num_generators(), "sharp");
  TensorPoly2 out(s.num_generators());
  for (const auto& [ks, cs] : s.terms())
    for (const auto& [kt, ct] : t.terms()) out.add_term({ks[0] + kt[0], kt[1] + ks[1]}, cs * ct);
  return out;
}

TensorPoly2 flip(const TensorPoly2& s) {
  TensorPoly2 out(s.num_generators());
  for (const auto& [k, c] : s.terms()) out.add_term({k[1], k[0]}, c);
  return out;
}

TensorPoly2 tensor_star(const TensorPoly2& s) {
  TensorPoly2 out(s.num_generators());
  for (const auto& [k, c] : s.terms()) out.add_term({k[0].reversed(), k[1].reversed()}, c.conj());
  return out;
}

TensorPoly2 bimodule_mul(const NcPoly& lp, const TensorPoly2& s, const NcPoly& rq) {
  detail::check_same_n(lp.num_generators(), s.num_generators(), "bimodule_mul");
  detail::check_same_n(rq.num_generators(), s.num_generators(), "bimodule_mul");
  TensorPoly2 out(s.num_generators());
  for (const auto& [wl, cl] : lp.terms())
    for (const auto& [k, c] : s.terms())
      for (const auto& [wr, cr] : rq.terms()) out.add_term({wl + k[0], k[1] + wr}, cl * c * cr);
  return out;
}

NcPoly collapse(const NcPoly& eta, const TensorPoly2& s) {
  detail::check_same_n(eta.num_generators(), s.num_generators(), "collapse");
  NcPoly::Terms out;
  for (const auto& [k, c] : s.terms())
    for (const auto& [we, ce] : eta.terms()) detail::accumulate(out, k[0] + we + k[1], c * ce);
  return NcPoly(s.num_generators(), std::move(out));
}

}  // namespace ncfree
