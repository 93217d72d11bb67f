#pragma once

#include <climits>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ncfree/scalar.hpp"
#include "ncfree/word.hpp"

namespace ncfree {

/// Element of C<Z_1,...,Z_n>: sparse Word -> Scalar map in canonical form (no zero coefficient).
class NcPoly {
 public:
  using Terms = std::map<Word, Scalar>;

  explicit NcPoly(int n = 0) : n_(n) {}
  /// Validates every letter against n and drops zero coefficients.
  NcPoly(int n, Terms terms);

  static NcPoly constant(int n, const Scalar& c);
  static NcPoly generator(int n, Word::Letter j);
  static NcPoly monomial(int n, Word w, const Scalar& c = 1);

  /// Text grammar: terms joined by '+'/'-', each `coeff * Z i1 ... ik`, `coeff`, or `Z i1 ... ik`.
  static NcPoly parse(std::string_view text, int n);
  std::string str() const;

  int num_generators() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Word& w) const;
  bool is_self_adjoint() const;

  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  NcPoly& operator*=(const Scalar& c);

  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  friend NcPoly operator*(NcPoly a, const Scalar& c) { return a *= c; }
  friend NcPoly operator*(const Scalar& c, NcPoly a) { return a *= c; }
  friend NcPoly operator-(NcPoly a) { return a *= Scalar(-1); }

  friend bool operator==(const NcPoly& a, const NcPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_ = 0;
  Terms terms_;
};

inline constexpr int kZeroPolyDegree = INT_MIN;

/// (lambda Z_{i1}...Z_{ik})* = conj(lambda) Z_{ik}...Z_{i1}.
NcPoly star(const NcPoly& p);
/// Longest word length with a nonzero coefficient; kZeroPolyDegree for 0.
int total_degree(const NcPoly& p);
/// Sum of the top-degree terms. Throws DomainError for the zero polynomial.
NcPoly leading_part(const NcPoly& p);
/// p^k, k >= 0.
NcPoly power(const NcPoly& p, int k);

/// Unital homomorphism Z_j -> assignment[j-1]. All matrices must be square, of equal size,
/// and Hermitian to within hermitian_tol (relative to the largest entry).
Eigen::MatrixXcd evaluate(const NcPoly& p, std::span<const Eigen::MatrixXcd> assignment,
                          double hermitian_tol = 1e-9);

namespace detail {
void accumulate(NcPoly::Terms& terms, const Word& w, const Scalar& c);
void check_same_n(int a, int b, const char* op);
void check_letters(int n, const Word& w);
}  // namespace detail

}  // namespace ncfree
