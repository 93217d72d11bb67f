#include "ncfree/scalar.hpp"

#include <cctype>
#include <ostream>
#include <string>

#include "ncfree/errors.hpp"
#include "text_cursor.hpp"

namespace ncfree {

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  canonicalize();
}

void Scalar::canonicalize() {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DomainError("division by zero scalar");
  const mpq_class d = o.norm_sq();
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / d;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string Scalar::str() const {
  if (is_real()) return re_.get_str();
  std::string out = re_.get_str();
  if (sgn(im_) > 0) out += '+';
  out += im_.get_str();
  out += " i";
  return out;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar Scalar::parse(std::string_view text) {
  detail::TextCursor cur(text);
  Scalar value = cur.scalar();
  cur.skip_space();
  if (!cur.done()) throw ParseError("trailing characters in scalar: '" + std::string(text) + "'");
  return value;
}

}  // namespace ncfree
