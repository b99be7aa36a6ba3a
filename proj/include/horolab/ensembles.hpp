#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "horolab/modular.hpp"
#include "horolab/sections.hpp"
#include "horolab/sieve.hpp"
#include "horolab/summation.hpp"

namespace horolab {

// --- weight functions --------------------------------------------------------

// Compactly supported weights psi.  The smooth bump is C-infinity; the
// triangle is piecewise C^1; the indicator is piecewise C^1 with two jumps
// (its derivative vanishes a.e., so the W^{1,inf} norm is still finite).
class WeightFunction {
 public:
  enum class Kind { SmoothBump, Triangle, Indicator };

  static WeightFunction smooth_bump(double a, double b);
  static WeightFunction triangle(double a, double b);
  static WeightFunction indicator(double a, double b);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }                       // W
  double length_scale() const { return std::max({std::abs(a_), std::abs(b_), 1.0}); }  // L
  double integral() const { return integral_; }
  double sup_norm() const { return 1.0; }
  double deriv_sup_norm() const { return deriv_sup_; }
  double w1_inf() const { return 1.0 + deriv_sup_; }             // ||psi||_inf + ||psi'||_inf
  std::string describe() const;

 private:
  Kind kind_ = Kind::Indicator;
  double a_ = 0, b_ = 1;
  double integral_ = 1;
  double deriv_sup_ = 0;
};

// --- ensemble averages -------------------------------------------------------

// integer summation window {k : k/N in [psi.a, psi.b)}
inline std::pair<std::int64_t, std::int64_t> index_window(const WeightFunction& psi,
                                                          std::int64_t denom) {
  const double lo = psi.a() * static_cast<double>(denom);
  const double hi = psi.b() * static_cast<double>(denom);
  return {static_cast<std::int64_t>(std::ceil(lo)), static_cast<std::int64_t>(std::ceil(hi))};
}

// (1/N) sum_k f(n(k/N) a(1/N)) psi(k/N)
template <class F>
double nonprimitive_average(const HorocycleSection& n, F&& f, const WeightFunction& psi,
                            std::int64_t N, int workers = 0) {
  if (N < 1) throw std::invalid_argument("nonprimitive_average: N must be >= 1");
  const auto [k_lo, k_hi] = index_window(psi, N);
  const GroupElement shrink = scaling(1.0 / static_cast<double>(N));
  const double sum = deterministic_sum(
      k_lo, k_hi,
      [&](std::int64_t k) {
        const double t = static_cast<double>(k) / static_cast<double>(N);
        return f(reduce(n.at(t) * shrink)) * psi(t);
      },
      workers);
  return sum / static_cast<double>(N);
}

// (1/phi(q)) sum_{(p,q)=1} f(n(p/q) a(1/q)) psi(p/q)
template <class F>
double primitive_average(const HorocycleSection& n, F&& f, const WeightFunction& psi,
                         const SieveTable& sieve, std::int64_t q, int workers = 0) {
  if (q < 1) throw std::invalid_argument("primitive_average: q must be >= 1");
  const std::vector<std::int64_t> ps = coprime_residues(q, psi.a(), psi.b());
  const GroupElement shrink = scaling(1.0 / static_cast<double>(q));
  const double sum = deterministic_sum(
      std::int64_t(0), static_cast<std::int64_t>(ps.size()),
      [&](std::int64_t i) {
        const double t = static_cast<double>(ps[static_cast<std::size_t>(i)]) / static_cast<double>(q);
        return f(reduce(n.at(t) * shrink)) * psi(t);
      },
      workers);
  return sum / static_cast<double>(sieve.phi(q));
}

// (1/N) sum_k f(n(k/N) a(1/N)) psi(k/N) e(c k / N) for each twist c.  When
// subtract_mean is set, f is replaced by f - *subtract_mean (the decay claim
// concerns observables of zero mean).  The f psi terms are evaluated once
// and shared across all twists.
template <class F>
std::vector<std::complex<double>> twisted_average(const HorocycleSection& n, F&& f,
                                                  const WeightFunction& psi, std::int64_t N,
                                                  std::span<const double> twists,
                                                  std::optional<double> subtract_mean,
                                                  int workers = 0) {
  if (N < 1) throw std::invalid_argument("twisted_average: N must be >= 1");
  const auto [k_lo, k_hi] = index_window(psi, N);
  const std::int64_t count = std::max<std::int64_t>(0, k_hi - k_lo);
  const double mean = subtract_mean.value_or(0.0);
  const GroupElement shrink = scaling(1.0 / static_cast<double>(N));

  std::vector<double> term(static_cast<std::size_t>(count));
  auto fill = parallel_map_chunks(
      (count + kSumChunk - 1) / kSumChunk,
      [&](std::int64_t c) {
        const std::int64_t lo = c * kSumChunk, hi = std::min(count, lo + kSumChunk);
        for (std::int64_t i = lo; i < hi; ++i) {
          const double t = static_cast<double>(k_lo + i) / static_cast<double>(N);
          term[static_cast<std::size_t>(i)] = (f(reduce(n.at(t) * shrink)) - mean) * psi(t);
        }
        return 0;
      },
      workers);
  (void)fill;

  std::vector<std::complex<double>> out(twists.size());
  auto phases = parallel_map_chunks(
      static_cast<std::int64_t>(twists.size()),
      [&](std::int64_t j) {
        const double c_over_n = twists[static_cast<std::size_t>(j)] / static_cast<double>(N);
        const std::complex<double> s = pairwise_sum(std::int64_t(0), count, [&](std::int64_t i) {
          return term[static_cast<std::size_t>(i)] *
                 e_unit(c_over_n * static_cast<double>(k_lo + i));
        });
        out[static_cast<std::size_t>(j)] = s / static_cast<double>(N);
        return 0;
      },
      workers);
  (void)phases;
  return out;
}

// Normalized Gauss-Legendre time average (1/(beta-alpha)) int f(n(t) a(y)) dt
// with a half-resolution refinement check.
struct QuadResult {
  double value = 0;
  double refinement_delta = 0;  // |full resolution - half resolution|
};

struct GaussLegendreCache {
  double nodes[8], weights[8];
  GaussLegendreCache();
};

template <class F>
QuadResult continuous_average(const HorocycleSection& n, F&& f, double alpha, double beta,
                              double y, std::int64_t quad_points, int workers = 0) {
  if (!(alpha < beta)) throw std::invalid_argument("continuous_average: need alpha < beta");
  if (!(y > 0)) throw std::invalid_argument("continuous_average: need y > 0");
  if (quad_points < 64) throw std::invalid_argument("continuous_average: need quad_points >= 64");
  const GroupElement shrink = scaling(y);
  auto integrand = [&](double t) { return f(reduce(n.at(t) * shrink)); };

  constexpr int kOrder = 8;
  auto run = [&](std::int64_t points) {
    const std::int64_t panels = std::max<std::int64_t>(1, points / kOrder);
    static const GaussLegendreCache rule;
    const double h = (beta - alpha) / static_cast<double>(panels);
    const double sum = deterministic_sum(
        std::int64_t(0), panels,
        [&](std::int64_t p) {
          const double lo = alpha + static_cast<double>(p) * h;
          double acc = 0;
          for (int i = 0; i < kOrder; ++i)
            acc += rule.weights[i] * integrand(lo + 0.5 * h * (rule.nodes[i] + 1.0));
          return acc * 0.5 * h;
        },
        workers);
    return sum / (beta - alpha);
  };
  QuadResult out;
  out.value = run(quad_points);
  out.refinement_delta = std::abs(out.value - run(quad_points / 2));
  return out;
}

// D_M f(x) = (1/M) sum_{m<M} f(x u(m)) - haar_ref
template <class F>
double discrepancy(F&& f, const ReducedPoint& x, std::int64_t M, double haar_ref) {
  if (M < 1) throw std::invalid_argument("discrepancy: M must be >= 1");
  const GroupElement g = x.element();
  const double sum = pairwise_sum(std::int64_t(0), M, [&](std::int64_t m) {
    return f(reduce(g * unipotent(static_cast<double>(m))));
  });
  return sum / static_cast<double>(M) - haar_ref;
}

// Monte Carlo of int |D_M f|^2 dnu for M = 1, 2, 4, ..., 2^max_log2; one
// orbit of length 2^max_log2 is shared across all M per sample.
std::vector<MonteCarlo> discrepancy_square_means(const TestFunction& f, int max_log2,
                                                 std::int64_t n, const HaarSampler& base,
                                                 double haar_ref, int workers = 0);

// Sample covariance of f(x u(t)) and h(x) over Haar samples: the mixing
// correlation int (u(t).f) h dnu - int f int h.  The estimate is the mean of
// per-chunk unbiased covariances and the error is their spread, so it is
// deterministic for any worker count; n is rounded up to whole chunks.
MonteCarlo mixing_correlation(const TestFunction& f, const TestFunction& h, double t,
                              std::int64_t n, const HaarSampler& base, int workers = 0);

// --- decay fits ---------------------------------------------------------------

struct DecayFit {
  std::vector<std::pair<double, double>> points;  // (parameter, abs_err)
  double delta_hat = 0;                           // -slope of log-log least squares
  double r2 = 0;
};

DecayFit fit_decay(std::span<const std::pair<double, double>> points);

// --- partition of unity --------------------------------------------------------

// Shifted C-infinity bumps Delta_j(t) = Delta(t - j*step) with
// sum_j Delta_j == 1; each Delta_j has support width < 2*step.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(double step);
  double step() const { return step_; }
  double term(std::int64_t j, double t) const;
  // j range (inclusive) outside which term(j,t) vanishes
  std::pair<std::int64_t, std::int64_t> support_indices(double t) const;

 private:
  double base(double u) const { return bump_profile(u / step_); }
  double step_;
};

}  // namespace horolab
