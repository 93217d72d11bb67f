#include "ncfree/derivations.hpp"

#include <string>

#include "ncfree/errors.hpp"

namespace ncfree {

namespace {

void check_index(Word::Letter j, int n) {
  if (j < 1 || j > n) {
    throw GeneratorMismatch("derivative index " + std::to_string(j) + " outside 1.." +
                            std::to_string(n));
  }
}

template <typename Emit>
void for_each_split(Word::Letter j, const Word& w, Emit&& emit) {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] == j) emit(w.slice(0, k), w.slice(k + 1, w.size() - k - 1));
}

}  // namespace

TensorPoly2 d(Word::Letter j, const NcPoly& p) {
  check_index(j, p.num_generators());
  TensorPoly2 out(p.num_generators());
  for (const auto& [w, c] : p.terms())
    for_each_split(j, w, [&](Word left, Word right) { out.add_term({std::move(left), std::move(right)}, c); });
  return out;
}

TensorPoly3 d_leg_sum(Word::Letter j, const TensorPoly2& s) {
  check_index(j, s.num_generators());
  TensorPoly3 out(s.num_generators());
  for (const auto& [k, c] : s.terms()) {
    for_each_split(j, k[0], [&](const Word& a, const Word& b) { out.add_term({a, b, k[1]}, c); });
    for_each_split(j, k[1], [&](const Word& a, const Word& b) { out.add_term({k[0], a, b}, c); });
  }
  return out;
}

}  // namespace ncfree
