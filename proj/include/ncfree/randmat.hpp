#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncfree/conjugate.hpp"
#include "ncfree/ncpoly.hpp"

namespace ncfree::randmat {

/// Name of the pseudorandom pipeline, recorded in every report: mt19937_64 streams seeded per
/// sample by splitmix64(root, index), Box-Muller normals from 53-bit uniforms.
inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64/box-muller";

enum class EnsembleKind { GUE, DiagonalRademacher, DiagonalFromMoments };

struct GeneratorEnsemble {
  EnsembleKind kind = EnsembleKind::GUE;
  double variance = 1.0;         // GUE
  std::vector<double> moments;   // DiagonalFromMoments: m_1, m_2, ...

  static GeneratorEnsemble gue(double variance = 1.0) { return {EnsembleKind::GUE, variance, {}}; }
  static GeneratorEnsemble rademacher() { return {EnsembleKind::DiagonalRademacher, 1.0, {}}; }
  static GeneratorEnsemble from_moments(std::vector<double> m) {
    return {EnsembleKind::DiagonalFromMoments, 1.0, std::move(m)};
  }
};

struct EnsembleConfig {
  int dim = 1;
  int samples = 1;
  std::uint64_t seed = 0;
  std::vector<GeneratorEnsemble> generators;

  int num_generators() const { return static_cast<int>(generators.size()); }
  /// Throws DomainError on dim < 1, samples < 1 or no generators.
  void validate() const;
};

using MatrixTuple = std::vector<Eigen::MatrixXcd>;

std::uint64_t child_seed(std::uint64_t root, std::uint64_t index);

/// The index-th sample; depends only on (seed, index, generator descriptions, dim).
MatrixTuple sample_one(const EnsembleConfig& config, int index);
std::vector<MatrixTuple> sample(const EnsembleConfig& config);

/// Atoms and weights of a discrete law matching m_0 = 1, m_1, ..., m_{2k-1} (Gauss quadrature
/// through the Hankel Cholesky factor). Fewer atoms are used when the Hankel matrix degenerates.
struct DiscreteLaw {
  std::vector<double> atoms;
  std::vector<double> weights;
};
DiscreteLaw discrete_law_from_moments(std::span<const double> moments);

/// Normalized trace (1/N) Tr p(X); the real part is returned.
double empirical_trace(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple);
/// (1/N) Tr p(X) q(X)^dagger.
std::complex<double> empirical_inner(const NcPoly& p, const NcPoly& q, std::span<const Eigen::MatrixXcd> tuple);

struct AtomWindowRule {
  double width_constant = 4.0;  // h(N) = width_constant / sqrt(N)
  double floor_factor = 0.5;    // report peaks above floor_factor * h * (1 / spread)

  double width(int dim) const;
};

struct Atom {
  double location = 0;
  double mass = 0;
};

/// Sliding-window scan over sorted eigenvalues. The mass estimate at each eigenvalue is the
/// fraction inside [x - h/2, x + h/2] minus the fraction in the two flanking half-windows
/// [x - h, x - h/2) and (x + h/2, x + h], so a smooth density contributes ~0 and an atom of
/// mass m contributes ~m.
struct AtomScan {
  std::vector<Atom> atoms;       // peaks above the floor, largest first
  double window_width = 0;
  double floor = 0;
  double max_mass = 0;           // largest background-corrected window mass anywhere
  double max_raw_window_mass = 0;  // largest uncorrected window fraction, for reference
};

AtomScan atom_scan(std::span<const double> eigenvalues, int dim, const AtomWindowRule& rule = {});

struct Histogram {
  double lo = 0;
  double hi = 0;
  std::vector<std::size_t> counts;
  double bin_width() const { return counts.empty() ? 0 : (hi - lo) / static_cast<double>(counts.size()); }
};

Histogram histogram(std::span<const double> sorted_values, std::size_t bins);

struct SpectralReport {
  std::vector<double> eigenvalues;  // pooled over samples, sorted
  Histogram hist;
  AtomScan scan;
  double max_imag_residual = 0;     // Hermiticity check of the evaluated matrices
  int dim = 0;
  int samples = 0;
};

/// Pooled spectrum of p(X) over the ensemble. p must be self-adjoint (checked symbolically).
SpectralReport spectrum(const NcPoly& p, const EnsembleConfig& config, std::size_t bins = 80,
                        const AtomWindowRule& rule = {});

struct KernelTraciality {
  int dim_ker = 0;
  int dim_ker_star = 0;
  bool equal() const { return dim_ker == dim_ker_star; }
};

/// Numerical kernel dimensions of x and x^dagger, each from its own SVD. Singular values
/// below tol * max(1, sigma_max) count as zero.
KernelTraciality kernel_traciality(const Eigen::MatrixXcd& x, double tol = 1e-10);

/// Largest singular value of p(X) over a single tuple, via Lanczos on p(X)^dagger p(X).
double opnorm_of(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple, int lanczos_steps = 80);
/// Max of opnorm_of over the ensemble's samples. Constants c*1 return |c| exactly.
double opnorm_estimate(const NcPoly& p, const EnsembleConfig& config, int lanczos_steps = 80);

/// Signed margins (bound - lhs) for the L2 estimates on dstar and the partial traces, with
/// ||.||_2 evaluated symbolically and operator norms from matrix models.
struct EmpiricalMargins {
  DabrowskiMargins closed_forms;  // estimates on P (x) 1 and 1 (x) P, ||P|| from matrices
  double norm_y1 = 0;             // ||Y1|| = ||P||
  double norm_y2 = 0;             // ||Y2||
  double xi_norm = 0;
  // ||dstar_j(Y1 (x) Y2)||_2 <= 3 ||xi_j||_2 ||Y1|| ||Y2||
  double dstar_product_lhs = 0, dstar_product_bound = 0;
  // ||(id (x) tau)((d_j Y1)(1 (x) Y2))||_2 <= 4 ||xi_j||_2 ||Y1|| ||Y2||
  double right_partial_lhs = 0, right_partial_bound = 0;
  // ||(tau (x) id)((Y1 (x) 1) d_j Y2)||_2 <= 4 ||xi_j||_2 ||Y1|| ||Y2||
  double left_partial_lhs = 0, left_partial_bound = 0;
  // |<(d_j Y1)(1 (x) Y2), Y2 (x) Y1>| <= ||d_j Y1||_2 ||Y2||_2 ||Y2|| ||Y1||  (Cauchy-Schwarz step)
  double pairing_lhs = 0, pairing_bound = 0;

  double min_margin() const;
};

EmpiricalMargins empirical_margins(const ConjugateCandidate& c, Word::Letter j, const NcPoly& y1,
                                   const NcPoly& y2, const EnsembleConfig& config, int lanczos_steps = 80);

/// Same, with operator norms supplied by the caller (e.g. already computed on a shared tuple).
EmpiricalMargins empirical_margins_with_norms(const ConjugateCandidate& c, Word::Letter j, const NcPoly& y1,
                                              const NcPoly& y2, double norm_y1, double norm_y2);

}  // namespace ncfree::randmat
