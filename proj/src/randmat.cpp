#include "ncfree/randmat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/tensor.hpp"
#include "ncfree/trace.hpp"

namespace ncfree::randmat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Normal deviates built only from the engine's raw 64-bit output, so streams are identical
// across standard libraries (std::normal_distribution is implementation-defined).
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

Eigen::MatrixXcd draw_gue(NormalSource& rng, int dim, double variance) {
  const double diag_sd = std::sqrt(variance / dim);
  const double off_sd = std::sqrt(variance / (2.0 * dim));
  Eigen::MatrixXcd h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = rng.normal() * diag_sd;
    for (int k = i + 1; k < dim; ++k) {
      const double re = rng.normal() * off_sd;
      const double im = rng.normal() * off_sd;
      h(i, k) = {re, im};
      h(k, i) = {re, -im};
    }
  }
  return h;
}

Eigen::MatrixXcd draw_diagonal(NormalSource& rng, int dim, const DiscreteLaw& law) {
  std::vector<double> cdf(law.weights.size());
  double acc = 0;
  for (std::size_t k = 0; k < cdf.size(); ++k) cdf[k] = acc += law.weights[k];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    m(i, i) = law.atoms[k];
  }
  return m;
}

// y = p(X) v, sharing work between words with a common suffix.
Eigen::VectorXcd apply_poly(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple, const Eigen::VectorXcd& v) {
  std::vector<Word> reversed;
  std::vector<std::complex<double>> coeffs;
  std::vector<std::size_t> order;
  for (const auto& [w, c] : p.terms()) {
    reversed.push_back(w.reversed());
    coeffs.push_back(c.to_complex());
    order.push_back(order.size());
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(reversed[a].begin(), reversed[a].end(), reversed[b].begin(),
                                        reversed[b].end());
  });
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  std::vector<Eigen::VectorXcd> stack;
  std::vector<Word::Letter> path;
  for (std::size_t idx : order) {
    const Word& r = reversed[idx];
    std::size_t common = 0;
    while (common < path.size() && common < r.size() && path[common] == r[common]) ++common;
    path.resize(common);
    stack.resize(common);
    for (std::size_t k = common; k < r.size(); ++k) {
      const auto& x = tuple[static_cast<std::size_t>(r[k] - 1)];
      stack.push_back(x * (stack.empty() ? v : stack.back()));
      path.push_back(r[k]);
    }
    out += coeffs[idx] * (r.empty() ? v : stack.back());
  }
  return out;
}

void check_tuple(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple) {
  if (static_cast<int>(tuple.size()) != p.num_generators()) {
    throw GeneratorMismatch("matrix tuple has " + std::to_string(tuple.size()) + " entries for " +
                            std::to_string(p.num_generators()) + " generators");
  }
  for (const auto& m : tuple)
    if (m.rows() != tuple[0].rows() || m.cols() != tuple[0].rows()) throw DomainError("matrix dimension mismatch");
}

}  // namespace

void EnsembleConfig::validate() const {
  if (dim < 1) throw DomainError("ensemble dim must be >= 1");
  if (samples < 1) throw DomainError("ensemble samples must be >= 1");
  if (generators.empty()) throw DomainError("ensemble needs at least one generator");
  for (const auto& g : generators) {
    if (g.kind == EnsembleKind::GUE && !(g.variance > 0)) throw DomainError("GUE variance must be positive");
    if (g.kind == EnsembleKind::DiagonalFromMoments && g.moments.empty())
      throw DomainError("DiagonalFromMoments needs a moment sequence");
  }
}

std::uint64_t child_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(index));
}

DiscreteLaw discrete_law_from_moments(std::span<const double> moments) {
  const std::size_t L = moments.size();
  auto m = [&](std::size_t k) { return k == 0 ? 1.0 : moments[k - 1]; };
  std::size_t k = (L + 1) / 2;
  if (k == 0) return {{0.0}, {1.0}};
  // rows 0..k-1 of the upper Cholesky factor of the Hankel matrix H_ij = m_{i+j}, columns 0..k
  std::vector<std::vector<double>> r(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    double d = m(2 * i);
    for (std::size_t l = 0; l < i; ++l) d -= r[l][i] * r[l][i];
    if (d <= 1e-12 * std::max(1.0, m(2 * i))) {
      k = i;
      break;
    }
    r[i][i] = std::sqrt(d);
    for (std::size_t j = i + 1; j <= k; ++j) {
      double s = m(i + j);
      for (std::size_t l = 0; l < i; ++l) s -= r[l][i] * r[l][j];
      r[i][j] = s / r[i][i];
    }
  }
  if (k == 0) throw DomainError("moment sequence does not define a probability law");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) {
    double alpha = r[j][j + 1] / r[j][j];
    if (j > 0) alpha -= r[j - 1][j] / r[j - 1][j - 1];
    jacobi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = alpha;
    if (j + 1 < k) {
      const double beta = r[j + 1][j + 1] / r[j][j];
      jacobi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) = beta;
      jacobi(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = beta;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  DiscreteLaw law;
  for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
    law.atoms.push_back(es.eigenvalues()(a));
    const double v0 = es.eigenvectors()(0, a);
    law.weights.push_back(v0 * v0);
  }
  return law;
}

MatrixTuple sample_one(const EnsembleConfig& config, int index) {
  config.validate();
  const std::uint64_t sample_seed = child_seed(config.seed, static_cast<std::uint64_t>(index));
  MatrixTuple tuple;
  for (std::size_t g = 0; g < config.generators.size(); ++g) {
    const auto& gen = config.generators[g];
    NormalSource rng(child_seed(sample_seed, g));
    switch (gen.kind) {
      case EnsembleKind::GUE:
        tuple.push_back(draw_gue(rng, config.dim, gen.variance));
        break;
      case EnsembleKind::DiagonalRademacher:
        tuple.push_back(draw_diagonal(rng, config.dim, DiscreteLaw{{-1.0, 1.0}, {0.5, 0.5}}));
        break;
      case EnsembleKind::DiagonalFromMoments:
        tuple.push_back(draw_diagonal(rng, config.dim, discrete_law_from_moments(gen.moments)));
        break;
    }
  }
  return tuple;
}

std::vector<MatrixTuple> sample(const EnsembleConfig& config) {
  config.validate();
  std::vector<MatrixTuple> out;
  out.reserve(static_cast<std::size_t>(config.samples));
  for (int s = 0; s < config.samples; ++s) out.push_back(sample_one(config, s));
  return out;
}

double empirical_trace(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple) {
  check_tuple(p, tuple);
  // Tr(A X_last) needs only the product of the first L-1 letters
  const Eigen::MatrixXcd m = evaluate(p, tuple);
  return m.trace().real() / static_cast<double>(m.rows());
}

std::complex<double> empirical_inner(const NcPoly& p, const NcPoly& q, std::span<const Eigen::MatrixXcd> tuple) {
  check_tuple(p, tuple);
  check_tuple(q, tuple);
  const Eigen::MatrixXcd a = evaluate(p, tuple);
  const Eigen::MatrixXcd b = evaluate(q, tuple);
  return a.cwiseProduct(b.conjugate()).sum() / static_cast<double>(a.rows());
}

double AtomWindowRule::width(int dim) const { return width_constant / std::sqrt(static_cast<double>(dim)); }

AtomScan atom_scan(std::span<const double> eigenvalues, int dim, const AtomWindowRule& rule) {
  if (eigenvalues.empty()) throw DomainError("atom_scan on an empty sample");
  std::vector<double> e(eigenvalues.begin(), eigenvalues.end());
  std::sort(e.begin(), e.end());
  const double total = static_cast<double>(e.size());
  const double h = rule.width(dim);
  const double spread = e.back() - e.front();

  AtomScan scan;
  scan.window_width = h;
  scan.floor = rule.floor_factor * h / std::max(spread, h);

  auto count = [&](double lo, double hi, bool lo_closed, bool hi_closed) {
    auto first = lo_closed ? std::lower_bound(e.begin(), e.end(), lo) : std::upper_bound(e.begin(), e.end(), lo);
    auto last = hi_closed ? std::upper_bound(e.begin(), e.end(), hi) : std::lower_bound(e.begin(), e.end(), hi);
    return last > first ? static_cast<double>(last - first) : 0.0;
  };

  struct Candidate {
    double x, mass;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0 && e[i] == e[i - 1]) continue;
    const double x = e[i];
    const double centre = count(x - h / 2, x + h / 2, true, true);
    const double flanks = count(x - h, x - h / 2, true, false) + count(x + h / 2, x + h, false, true);
    const double mass = std::clamp((centre - flanks) / total, 0.0, 1.0);
    scan.max_raw_window_mass = std::max(scan.max_raw_window_mass, centre / total);
    scan.max_mass = std::max(scan.max_mass, mass);
    if (mass > scan.floor) candidates.push_back({x, mass});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.mass > b.mass; });
  for (const auto& c : candidates) {
    bool separate = std::all_of(scan.atoms.begin(), scan.atoms.end(),
                                [&](const Atom& a) { return std::abs(a.location - c.x) > h; });
    if (!separate) continue;
    // locate by the mean of the eigenvalues inside the centre window
    auto first = std::lower_bound(e.begin(), e.end(), c.x - h / 2);
    auto last = std::upper_bound(e.begin(), e.end(), c.x + h / 2);
    double sum = 0;
    for (auto it = first; it != last; ++it) sum += *it;
    scan.atoms.push_back({sum / static_cast<double>(last - first), c.mass});
  }
  return scan;
}

Histogram histogram(std::span<const double> sorted_values, std::size_t bins) {
  Histogram hist;
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  hist.counts.assign(bins, 0);
  if (sorted_values.empty()) return hist;
  hist.lo = sorted_values.front();
  hist.hi = sorted_values.back();
  if (hist.hi - hist.lo <= 0) {
    hist.lo -= 0.5;
    hist.hi += 0.5;
  }
  const double width = hist.bin_width();
  for (double v : sorted_values) {
    auto b = static_cast<std::size_t>((v - hist.lo) / width);
    hist.counts[std::min(b, bins - 1)]++;
  }
  return hist;
}

SpectralReport spectrum(const NcPoly& p, const EnsembleConfig& config, std::size_t bins, const AtomWindowRule& rule) {
  config.validate();
  if (p.num_generators() != config.num_generators()) {
    throw GeneratorMismatch("polynomial and ensemble disagree on the number of generators");
  }
  if (!p.is_self_adjoint()) throw DomainError("spectrum needs a self-adjoint polynomial: " + p.str());
  SpectralReport report;
  report.dim = config.dim;
  report.samples = config.samples;
  // one slot per sample; pooling in index order keeps the result independent of scheduling
  const auto count = static_cast<std::size_t>(config.samples);
  std::vector<Eigen::VectorXd> spectra(count);
  std::vector<double> residuals(count, 0.0);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s; (s = next.fetch_add(1)) < count;) {
      try {
        const MatrixTuple tuple = sample_one(config, static_cast<int>(s));
        const Eigen::MatrixXcd m = evaluate(p, tuple);
        residuals[s] = (m - m.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw DomainError("eigensolver failed");
        spectra[s] = es.eigenvalues();
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  report.eigenvalues.reserve(count * static_cast<std::size_t>(config.dim));
  for (std::size_t s = 0; s < count; ++s) {
    report.max_imag_residual = std::max(report.max_imag_residual, residuals[s]);
    report.eigenvalues.insert(report.eigenvalues.end(), spectra[s].begin(), spectra[s].end());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  report.hist = histogram(report.eigenvalues, bins);
  report.scan = atom_scan(report.eigenvalues, config.dim, rule);
  return report;
}

KernelTraciality kernel_traciality(const Eigen::MatrixXcd& x, double tol) {
  if (x.rows() != x.cols()) throw DomainError("kernel_traciality needs a square matrix");
  auto nullity = [tol](const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    const double threshold = tol * std::max(1.0, top);
    int zeros = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) < threshold) ++zeros;
    return zeros;
  };
  return {nullity(x), nullity(x.adjoint())};
}

double opnorm_of(const NcPoly& p, std::span<const Eigen::MatrixXcd> tuple, int lanczos_steps) {
  check_tuple(p, tuple);
  if (p.is_zero()) return 0.0;
  if (total_degree(p) == 0) return std::sqrt(p.coeff(Word()).norm_sq().get_d());
  const NcPoly adj = star(p);
  const Eigen::Index dim = tuple[0].rows();
  const int steps = std::max(1, static_cast<int>(std::min<Eigen::Index>(lanczos_steps, dim)));

  NormalSource rng(0x6c616e637a6f73ULL);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {rng.normal(), rng.normal()};
  v.normalize();

  Eigen::MatrixXcd basis(dim, steps);
  std::vector<double> alpha, beta;
  basis.col(0) = v;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXcd w = apply_poly(adj, tuple, apply_poly(p, tuple, basis.col(k)));
    const double a = basis.col(k).dot(w).real();
    alpha.push_back(a);
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();
    if (k + 1 == steps || b <= 1e-12 * std::max(1.0, std::abs(a))) break;
    beta.push_back(b);
    basis.col(k + 1) = w / b;
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double opnorm_estimate(const NcPoly& p, const EnsembleConfig& config, int lanczos_steps) {
  config.validate();
  if (p.num_generators() != config.num_generators()) {
    throw GeneratorMismatch("polynomial and ensemble disagree on the number of generators");
  }
  if (p.is_zero()) return 0.0;
  if (total_degree(p) == 0) return std::sqrt(p.coeff(Word()).norm_sq().get_d());
  double best = 0;
  for (int s = 0; s < config.samples; ++s) best = std::max(best, opnorm_of(p, sample_one(config, s), lanczos_steps));
  return best;
}

double EmpiricalMargins::min_margin() const {
  return std::min({closed_forms.min_margin(), dstar_product_bound - dstar_product_lhs,
                   right_partial_bound - right_partial_lhs, left_partial_bound - left_partial_lhs,
                   pairing_bound - pairing_lhs});
}

EmpiricalMargins empirical_margins_with_norms(const ConjugateCandidate& c, Word::Letter j, const NcPoly& y1,
                                              const NcPoly& y2, double norm_y1, double norm_y2) {
  const auto& t = c.trace;
  const int n = c.num_generators();
  const NcPoly one = NcPoly::constant(n, 1);

  EmpiricalMargins out;
  out.closed_forms = dabrowski_margins_with_norm(c, j, y1, norm_y1);
  out.norm_y1 = norm_y1;
  out.norm_y2 = norm_y2;
  out.xi_norm = out.closed_forms.xi_norm;
  const double scale = out.xi_norm * norm_y1 * norm_y2;

  out.dstar_product_lhs = norm2(t, dstar(c, j, TensorPoly2::simple({y1, y2})));
  out.dstar_product_bound = 3 * scale;

  const TensorPoly2 dy1_y2 = bimodule_mul(one, d(j, y1), y2);
  out.right_partial_lhs = norm2(t, partial_trace(t, dy1_y2, Side::Right));
  out.right_partial_bound = 4 * scale;

  out.left_partial_lhs = norm2(t, partial_trace(t, bimodule_mul(y1, d(j, y2), one), Side::Left));
  out.left_partial_bound = 4 * scale;

  const Scalar pairing = inner2(t, dy1_y2, TensorPoly2::simple({y2, y1}));
  out.pairing_lhs = std::sqrt(pairing.norm_sq().get_d());
  out.pairing_bound = norm2(t, d(j, y1)) * norm2(t, y2) * norm_y2 * norm_y1;
  return out;
}

EmpiricalMargins empirical_margins(const ConjugateCandidate& c, Word::Letter j, const NcPoly& y1,
                                   const NcPoly& y2, const EnsembleConfig& config, int lanczos_steps) {
  return empirical_margins_with_norms(c, j, y1, y2, opnorm_estimate(y1, config, lanczos_steps),
                                      opnorm_estimate(y2, config, lanczos_steps));
}

}  // namespace ncfree::randmat
