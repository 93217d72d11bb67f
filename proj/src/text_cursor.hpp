#pragma once

// Hand-written scanner shared by the scalar, polynomial and tensor text grammars.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ncfree/errors.hpp"
#include "ncfree/scalar.hpp"
#include "ncfree/word.hpp"

namespace ncfree::detail {

class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

  bool consume(char c) {
    skip_space();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::optional<unsigned long> unsigned_integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) return std::nullopt;
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  /// Unsigned rational "a" or "a/b" (no sign, no surrounding space handling beyond leading).
  std::optional<mpq_class> unsigned_rational() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) return std::nullopt;
    std::size_t end = pos_;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      std::size_t save = pos_++;
      std::size_t dstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (dstart == pos_) {
        pos_ = save;
      } else {
        end = pos_;
      }
    }
    mpq_class q(std::string(text_.substr(start, end - start)), 10);
    if (q.get_den() == 0) fail("zero denominator");
    q.canonicalize();
    return q;
  }

  /// Reads a complex rational. In polynomial context "1/2 + 3 * Z 1" must stop after "1/2",
  /// so an imaginary tail is only accepted when it ends in the unit 'i'.
  Scalar scalar() {
    skip_space();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    skip_space();
    if (imaginary_unit()) return Scalar(0, sign);
    auto re = unsigned_rational();
    if (!re) fail("expected a number");
    mpq_class real = sign * *re;
    std::size_t after_real = pos_;
    if (imaginary_unit()) return Scalar(0, real);
    skip_space();
    if (peek() == '+' || peek() == '-') {
      int isign = peek() == '-' ? -1 : 1;
      ++pos_;
      skip_space();
      if (imaginary_unit()) return Scalar(real, isign);
      if (auto im = unsigned_rational(); im && imaginary_unit()) return Scalar(real, isign * *im);
    }
    pos_ = after_real;
    return Scalar(real, 0);
  }

 private:
  bool imaginary_unit() {
    std::size_t save = pos_;
    skip_space();
    if (peek() == 'i') {
      std::size_t next = pos_ + 1;
      if (next >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[next]))) {
        pos_ = next;
        return true;
      }
    }
    pos_ = save;
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// "Z i1 i2 ..." or "1" for the unit word.
inline Word read_word(TextCursor& cur) {
  cur.skip_space();
  if (cur.peek() == '1') {
    cur.consume('1');
    return Word();
  }
  cur.expect('Z');
  std::vector<Word::Letter> letters;
  while (auto v = cur.unsigned_integer()) letters.push_back(static_cast<Word::Letter>(*v));
  if (letters.empty()) cur.fail("expected at least one letter after 'Z'");
  return Word(std::move(letters));
}

}  // namespace ncfree::detail
