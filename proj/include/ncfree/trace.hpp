#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "ncfree/ncpoly.hpp"
#include "ncfree/tensor.hpp"

namespace ncfree {

/// Freely independent centred semicircular elements with the given variances.
struct SemicircularFamily {
  std::vector<mpq_class> variances;
};

/// Freely independent generators, each described by its moments m_1..m_D.
struct FreeFamily {
  std::vector<std::vector<mpq_class>> moments;
};

/// Joint moments listed word by word. Words missing from the table are looked up through
/// cyclic rotations (traciality) and through reversal with conjugation (self-adjointness).
struct ExplicitMoments {
  std::map<Word, Scalar> table;
  int degree_bound = 0;
};

struct DistributionSpec {
  int n = 0;
  std::variant<SemicircularFamily, FreeFamily, ExplicitMoments> family;
  /// Upper limit on word length for moment queries (a FreeFamily is further capped by the
  /// length of its moment sequences, ExplicitMoments by its own bound).
  int degree_bound = 12;

  static DistributionSpec semicircular(std::vector<mpq_class> variances, int degree_bound = 12);
  static DistributionSpec standard_semicircular(int n, int degree_bound = 12);
  static DistributionSpec free_family(std::vector<std::vector<mpq_class>> moments, int degree_bound = 12);
  static DistributionSpec explicit_moments(int n, std::map<Word, Scalar> table, int degree_bound);
};

/// Moment-cumulant inversion over non-crossing partitions: returns kappa_1..kappa_D.
std::vector<mpq_class> free_cumulants(const std::vector<mpq_class>& moments);

/// Trace functional tau induced by a DistributionSpec with a shared, thread-safe memo.
/// Copies share the memo.
class TraceFunctional {
 public:
  explicit TraceFunctional(DistributionSpec spec);

  const DistributionSpec& spec() const { return state_->spec; }
  int num_generators() const { return state_->spec.n; }
  /// Longest word the functional accepts.
  int degree_bound() const { return state_->bound; }

  /// tau(w). Throws DegreeBoundExceeded, or DomainError for a word absent from an explicit table.
  Scalar moment(const Word& w) const;

  std::size_t memo_size() const;

 private:
  Scalar compute(const Word& w) const;

  struct State {
    DistributionSpec spec;
    int bound = 0;
    std::vector<std::vector<mpq_class>> cumulants;  // per generator, index k -> kappa_{k}
    mutable std::shared_mutex mutex;
    mutable std::map<Word, Scalar> memo;
  };
  std::shared_ptr<State> state_;
};

enum class Side { Left, Right };

Scalar trace_poly(const TraceFunctional& t, const NcPoly& p);
/// (tau (x) tau)(s).
Scalar trace_tensor(const TraceFunctional& t, const TensorPoly2& s);
/// Side::Left applies tau to the left leg: (tau (x) id)(s). Side::Right gives (id (x) tau)(s).
NcPoly partial_trace(const TraceFunctional& t, const TensorPoly2& s, Side contracted);
/// (id (x) tau (x) id)(y).
TensorPoly2 contract_middle(const TraceFunctional& t, const TensorPoly3& y);
/// m_1 (id (x) tau (x) id)(y).
NcPoly collapse_middle(const TraceFunctional& t, const TensorPoly3& y);

/// <p, q> = tau(p q*).
Scalar inner(const TraceFunctional& t, const NcPoly& p, const NcPoly& q);
/// <s, u> = (tau (x) tau)(s u*).
Scalar inner2(const TraceFunctional& t, const TensorPoly2& s, const TensorPoly2& u);
/// Exact <p,p>, checked real and non-negative (NotPositive otherwise).
mpq_class norm2_squared(const TraceFunctional& t, const NcPoly& p);
double norm2(const TraceFunctional& t, const NcPoly& p);
mpq_class norm2_squared(const TraceFunctional& t, const TensorPoly2& s);
double norm2(const TraceFunctional& t, const TensorPoly2& s);

/// tau((p* p)^k)^{1/(2k)}: a lower bound for the operator norm, nondecreasing in k.
double opnorm_lower(const TraceFunctional& t, const NcPoly& p, int k);

}  // namespace ncfree
