#include "ncfree/word.hpp"

#include <algorithm>

namespace ncfree {

Word::Letter Word::max_letter() const {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::slice(std::size_t from, std::size_t count) const {
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(from + count)));
}

Word operator+(const Word& a, const Word& b) {
  std::vector<Word::Letter> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Word(std::move(out));
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string out = "Z";
  for (Letter l : letters_) {
    out += ' ';
    out += std::to_string(l);
  }
  return out;
}

std::vector<Word> words_of_length(int n, std::size_t len) {
  std::vector<Word> out;
  std::vector<Word::Letter> cur(len, 1);
  if (n <= 0) return len == 0 ? std::vector<Word>{Word()} : out;
  while (true) {
    out.emplace_back(cur);
    // odometer increment from the right
    std::size_t k = len;
    while (k > 0 && cur[k - 1] == n) {
      cur[k - 1] = 1;
      --k;
    }
    if (k == 0) break;
    ++cur[k - 1];
  }
  return out;
}

std::vector<Word> words_up_to(int n, std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    auto layer = words_of_length(n, len);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

}  // namespace ncfree
