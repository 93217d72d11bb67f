#pragma once

#include <vector>

#include "ncfree/ncpoly.hpp"
#include "ncfree/trace.hpp"

namespace ncfree {

/// Polynomial stand-in for a projection: only self-adjointness and tau(p) are used.
struct ProjectionSurrogate {
  NcPoly p;
  Scalar trace_weight;
};

/// Throws DomainError if p is not self-adjoint.
ProjectionSurrogate make_projection(const TraceFunctional& t, NcPoly p);

/// Delta_j = (tau (x) id) o d_j.
NcPoly delta(const TraceFunctional& t, Word::Letter j, const NcPoly& p);

/// Delta_{p,j} P = (tau (x) id)((p (x) 1) d_j P).
NcPoly delta_p(const TraceFunctional& t, const ProjectionSurrogate& proj, Word::Letter j, const NcPoly& p);

/// Delta_{p_d,i_d} ... Delta_{p_1,i_1} P, applying the word's letters left to right.
NcPoly iterated_delta_p(const TraceFunctional& t, const std::vector<ProjectionSurrogate>& projections,
                        const Word& word, const NcPoly& p);

/// Delta_{i_d} ... Delta_{i_1} P as a constant. The word must have length total_degree(P), in
/// which case the result is the coefficient of that word in P.
Scalar extract_leading_coeff(const TraceFunctional& t, const NcPoly& p, const Word& word);

/// Basis of the null space of the Gram matrix <w, w'> over words of length <= D, as polynomials
/// with monic leading word. Empty means no algebraic relation of degree <= D.
std::vector<NcPoly> relation_kernel(const TraceFunctional& t, int D);

}  // namespace ncfree
