#include "ncfree/ncpoly.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ncfree/errors.hpp"
#include "text_cursor.hpp"

namespace ncfree {

namespace detail {

void accumulate(NcPoly::Terms& terms, const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

void check_same_n(int a, int b, const char* op) {
  if (a != b) {
    throw GeneratorMismatch(std::string(op) + ": generator count mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

void check_letters(int n, const Word& w) {
  for (Word::Letter l : w) {
    if (l < 1 || l > n) {
      throw GeneratorMismatch("letter " + std::to_string(l) + " outside 1.." + std::to_string(n));
    }
  }
}

}  // namespace detail

NcPoly::NcPoly(int n, Terms terms) : n_(n) {
  for (auto& [w, c] : terms) {
    detail::check_letters(n, w);
    if (!c.is_zero()) terms_.emplace(w, std::move(c));
  }
}

NcPoly NcPoly::constant(int n, const Scalar& c) { return monomial(n, Word(), c); }

NcPoly NcPoly::generator(int n, Word::Letter j) { return monomial(n, Word{j}); }

NcPoly NcPoly::monomial(int n, Word w, const Scalar& c) {
  Terms t;
  t.emplace(std::move(w), c);
  return NcPoly(n, std::move(t));
}

Scalar NcPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar() : it->second;
}

bool NcPoly::is_self_adjoint() const { return star(*this) == *this; }

NcPoly& NcPoly::operator+=(const NcPoly& o) {
  detail::check_same_n(n_, o.n_, "add");
  for (const auto& [w, c] : o.terms_) detail::accumulate(terms_, w, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& o) {
  detail::check_same_n(n_, o.n_, "sub");
  for (const auto& [w, c] : o.terms_) detail::accumulate(terms_, w, -c);
  return *this;
}

NcPoly& NcPoly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  detail::check_same_n(a.n_, b.n_, "mul");
  NcPoly::Terms out;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) detail::accumulate(out, wa + wb, ca * cb);
  NcPoly r(a.n_);
  r.terms_ = std::move(out);
  return r;
}

std::string NcPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += c.str();
    if (!w.empty()) {
      out += " * ";
      out += w.str();
    }
  }
  return out;
}

NcPoly NcPoly::parse(std::string_view text, int n) {
  detail::TextCursor cur(text);
  Terms terms;
  cur.skip_space();
  if (cur.done()) throw ParseError("empty polynomial text");
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
        cur.fail("expected '+' or '-' between terms");
      }
    }
    first = false;
    cur.skip_space();
    // a bare leading sign directly before a monomial, e.g. "- Z 1"
    std::size_t save = cur.position();
    if (cur.consume('-')) {
      cur.skip_space();
      if (cur.peek() == 'Z') {
        sign *= Scalar(-1);
      } else {
        cur.rewind(save);
      }
    }
    cur.skip_space();
    Scalar coeff(1);
    Word w;
    if (cur.peek() == 'Z') {
      w = detail::read_word(cur);
    } else {
      coeff = cur.scalar();
      if (cur.consume('*')) w = detail::read_word(cur);
    }
    detail::check_letters(n, w);
    detail::accumulate(terms, w, sign * coeff);
  }
  NcPoly p(n);
  p.terms_ = std::move(terms);
  return p;
}

NcPoly star(const NcPoly& p) {
  NcPoly::Terms out;
  for (const auto& [w, c] : p.terms()) detail::accumulate(out, w.reversed(), c.conj());
  return NcPoly(p.num_generators(), std::move(out));
}

int total_degree(const NcPoly& p) {
  if (p.is_zero()) return kZeroPolyDegree;
  // graded order: the last key has maximal length
  return static_cast<int>(p.terms().rbegin()->first.size());
}

NcPoly leading_part(const NcPoly& p) {
  if (p.is_zero()) throw DomainError("leading_part of the zero polynomial");
  const auto d = static_cast<std::size_t>(total_degree(p));
  NcPoly::Terms out;
  for (const auto& [w, c] : p.terms())
    if (w.size() == d) out.emplace(w, c);
  return NcPoly(p.num_generators(), std::move(out));
}

NcPoly power(const NcPoly& p, int k) {
  if (k < 0) throw DomainError("negative power");
  NcPoly out = NcPoly::constant(p.num_generators(), 1);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

Eigen::MatrixXcd evaluate(const NcPoly& p, std::span<const Eigen::MatrixXcd> assignment,
                          double hermitian_tol) {
  if (static_cast<int>(assignment.size()) != p.num_generators()) {
    throw GeneratorMismatch("evaluate: " + std::to_string(assignment.size()) + " matrices for " +
                            std::to_string(p.num_generators()) + " generators");
  }
  if (assignment.empty()) throw DomainError("evaluate: no matrices to fix the dimension");
  const Eigen::Index dim = assignment.front().rows();
  for (const auto& m : assignment) {
    if (m.rows() != dim || m.cols() != dim) throw DomainError("evaluate: dimension mismatch");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol * scale) {
      throw DomainError("evaluate: non-Hermitian input matrix");
    }
  }

  // Depth-first over words in plain lexicographic order so prefix products are shared.
  std::vector<const std::pair<const Word, Scalar>*> order;
  order.reserve(p.term_count());
  for (const auto& term : p.terms()) order.push_back(&term);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return std::lexicographical_compare(a->first.begin(), a->first.end(), b->first.begin(),
                                        b->first.end());
  });

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Eigen::MatrixXcd> stack;  // stack[k] = product of the first k+1 letters of `path`
  std::vector<Word::Letter> path;
  for (const auto* term : order) {
    const Word& w = term->first;
    const std::complex<double> c = term->second.to_complex();
    std::size_t common = 0;
    while (common < path.size() && common < w.size() && path[common] == w[common]) ++common;
    path.resize(common);
    stack.resize(common);
    for (std::size_t k = common; k < w.size(); ++k) {
      const auto& x = assignment[static_cast<std::size_t>(w[k] - 1)];
      if (stack.empty()) {
        stack.push_back(x);
      } else {
        Eigen::MatrixXcd next = stack.back() * x;
        stack.push_back(std::move(next));
      }
      path.push_back(w[k]);
    }
    if (w.empty()) {
      result.diagonal().array() += c;
    } else {
      result += c * stack.back();
    }
  }
  return result;
}

}  // namespace ncfree
