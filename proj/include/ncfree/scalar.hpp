#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ncfree {

/// Exact complex rational re + im*i.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class re, mpq_class im = 0);

  static Scalar i() { return Scalar(0, 1); }

  /// Accepts "3", "-1/2", "1/2+3/4 i", "-2 i", "i", "-i".
  static Scalar parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  Scalar conj() const { return Scalar(re_, -im_); }
  /// |z|^2, exact.
  mpq_class norm_sq() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// "a/b" when real, "a/b+c/d i" otherwise; parse(str()) == *this.
  std::string str() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(-a.re_, -a.im_); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  void canonicalize();

  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace ncfree
