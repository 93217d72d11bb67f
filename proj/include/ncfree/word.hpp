#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ncfree {

/// A non-commutative monomial Z_{i1} ... Z_{ik}, letters 1-based. The empty word is the unit.
///
/// Ordering is graded lexicographic (shorter words first), which is also the print order.
class Word {
 public:
  using Letter = int;

  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t k) const { return letters_[k]; }
  std::span<const Letter> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Letter max_letter() const;
  Word reversed() const { return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend())); }
  /// Letters [from, from+count).
  Word slice(std::size_t from, std::size_t count) const;

  friend Word operator+(const Word& a, const Word& b);

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

  /// "Z 1 2 1", or "1" for the unit word.
  std::string str() const;

 private:
  std::vector<Letter> letters_;
};

/// Every word over {1..n} of length exactly len, in lexicographic order.
std::vector<Word> words_of_length(int n, std::size_t len);
/// Every word of length <= max_len, graded lexicographic order.
std::vector<Word> words_up_to(int n, std::size_t max_len);

}  // namespace ncfree
