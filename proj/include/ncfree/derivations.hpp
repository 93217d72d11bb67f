#pragma once

#include "ncfree/ncpoly.hpp"
#include "ncfree/tensor.hpp"

namespace ncfree {

/// Free difference quotient: for each monomial, sum of P1 (x) P2 over every factorization
/// P = P1 Z_j P2. Throws GeneratorMismatch unless 1 <= j <= n.
TensorPoly2 d(Word::Letter j, const NcPoly& p);

/// (d_j (x) id + id (x) d_j)(s), landing in the triple tensor power.
TensorPoly3 d_leg_sum(Word::Letter j, const TensorPoly2& s);

}  // namespace ncfree
