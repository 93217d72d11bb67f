#pragma once

#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/ncpoly.hpp"
#include "ncfree/tensor.hpp"
#include "ncfree/trace.hpp"

namespace ncfree {

/// Polynomial candidates xi_1..xi_n for the conjugate variables of the distribution behind `trace`.
struct ConjugateCandidate {
  ConjugateCandidate(std::vector<NcPoly> xi, TraceFunctional trace);

  /// xi_j = Z_j / sigma_j^2, the conjugate system of a semicircular family.
  static ConjugateCandidate semicircular(const DistributionSpec& spec);

  int num_generators() const { return trace.num_generators(); }
  const NcPoly& operator[](Word::Letter j) const { return xi.at(static_cast<std::size_t>(j - 1)); }
  int max_degree() const;

  std::vector<NcPoly> xi;
  TraceFunctional trace;
};

struct ConjugateFailure {
  Word::Letter j = 0;
  Word word;
  Scalar lhs;  // (tau (x) tau)(d_j w)
  Scalar rhs;  // tau(xi_j w)
};

struct VerificationReport {
  int max_degree_checked = 0;
  std::size_t words_checked = 0;
  std::vector<ConjugateFailure> failures;  // sorted by (j, word)
  std::vector<Word::Letter> not_self_adjoint;

  bool passed() const { return failures.empty(); }
};

/// Compares (tau (x) tau)(d_j w) with tau(xi_j w) exactly for every word of length <= D and every j.
VerificationReport check_conjugate(const ConjugateCandidate& c, int D);

/// Adjoint of d_j on the tensor square: m_{xi_j}(y) - m_1 (id (x) tau (x) id)(d_j (x) id + id (x) d_j)(y).
NcPoly dstar(const ConjugateCandidate& c, Word::Letter j, const TensorPoly2& y);

/// <dstar_j(y), q> == <y, d_j q>, exactly.
bool check_adjoint(const ConjugateCandidate& c, Word::Letter j, const TensorPoly2& y, const NcPoly& q);

struct DualitySides {
  NcPoly lhs;  // ((tau (x) id)((p1 (x) 1) d_i p2))*
  NcPoly rhs;  // (id (x) tau)(d_i(p2*) (1 (x) p1*))
};
DualitySides duality_sides(const TraceFunctional& t, const NcPoly& p1, const NcPoly& p2, Word::Letter i);
bool check_duality(const TraceFunctional& t, const NcPoly& p1, const NcPoly& p2, Word::Letter i);

/// Both sides of the L2 estimates for the closed forms of dstar on P (x) 1 and 1 (x) P.
/// `opnorm` is whatever operator-norm value the caller trusts; the margins are bound - lhs.
struct DabrowskiMargins {
  double xi_norm = 0;          // ||xi_j||_2
  double opnorm = 0;           // ||P|| estimate used for the bound
  double lhs_right = 0;        // ||P xi_j - (id (x) tau)(d_j P)||_2
  double lhs_left = 0;         // ||xi_j P - (tau (x) id)(d_j P)||_2
  double lhs_partial_right = 0;  // ||(id (x) tau)(d_j P)||_2
  double lhs_partial_left = 0;   // ||(tau (x) id)(d_j P)||_2
  double bound = 0;            // ||xi_j||_2 ||P||

  double margin_right() const { return bound - lhs_right; }
  double margin_left() const { return bound - lhs_left; }
  double margin_partial_right() const { return 2 * bound - lhs_partial_right; }
  double margin_partial_left() const { return 2 * bound - lhs_partial_left; }
  double min_margin() const;
};

/// Uses opnorm_lower(p, k) as the norm. A negative margin is not a refutation because that
/// value underestimates ||P||; see randmat::empirical_margins for the matrix-model estimate.
DabrowskiMargins dabrowski_margins(const ConjugateCandidate& c, Word::Letter j, const NcPoly& p, int k);
DabrowskiMargins dabrowski_margins_with_norm(const ConjugateCandidate& c, Word::Letter j, const NcPoly& p,
                                             double opnorm);

class ConjugateCheckFailed : public Error {
 public:
  ConjugateCheckFailed(const std::string& what, VerificationReport report)
      : Error(what), report_(std::move(report)) {}
  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

struct FisherInformation {
  Scalar exact;
  double value = 0;
  int degree_checked = 0;
};

/// sum_j <xi_j, xi_j>, after check_conjugate(c, D) passes; throws ConjugateCheckFailed otherwise.
FisherInformation fisher(const ConjugateCandidate& c, int D);

}  // namespace ncfree
