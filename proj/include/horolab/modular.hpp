#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>

#include "horolab/group.hpp"
#include "horolab/rng.hpp"
#include "horolab/summation.hpp"

namespace horolab {

// A point of the quotient space in canonical coordinates: the Gauss-reduced
// SL(2) part (z = m_red * i in the standard |Re z| <= 1/2, |z| >= 1 domain,
// rotation angle folded to [0, pi) because -I is in the lattice), and the
// affine part in lattice coordinates x_red in [0,1)^2, meaning the ambient
// affine component is x_red * m_red.
struct ReducedPoint {
  Mat2 m_red;
  Vec2 x_red;
  GroupElement gamma;  // integer entries; gamma * g_original = (m_red, x_red * m_red)
  std::complex<double> z;
  double theta = 0;

  GroupElement element() const { return {m_red, x_red * m_red}; }

  // rows of m_red = basis of the lattice Z^2 m_red (isometric embedding
  // (v1,v2) -> v1*i + v2 identifies row1/row2 with the periods)
  Vec2 basis_row1() const { return {m_red.a, m_red.b}; }
  Vec2 basis_row2() const { return {m_red.c, m_red.d}; }
};

// Membership in the closed fundamental domain, up to tol.
bool in_fundamental_domain(std::complex<double> z, double tol = 1e-12);

// Gauss reduction of the SL(2) part followed by mod-1 reduction of the
// affine part in lattice coordinates.  Total on finite inputs; throws on
// non-finite entries or if the iteration cap (1e4) is hit.
ReducedPoint reduce(const GroupElement& g);

// Euclidean length of the shortest vector of the affine lattice
// Z^2 m_red + x_red m_red, by enumeration of |k1|,|k2| <= 8 in lattice
// coordinates (plenty after reduction; a Lagrange-reduced basis needs ~1).
double shortest_affine_vector(const ReducedPoint& p);

// Smoothed count of affine lattice points with |v| in [r_inner, r_outer],
// edges mollified over width w.  r_inner <= 0 means a disc.
double smoothed_lattice_count(const ReducedPoint& p, double r_inner, double r_outer, double w);

// C-infinity bump profile exp(1 - 1/(1-s^2)) on |s|<1, peak value 1.
double bump_profile(double s);
// Smooth step: 0 for s<=0, 1 for s>=1, antisymmetric about s=1/2.
double smoothstep(double s);

// A bounded Gamma-invariant observable on the quotient.  All kinds factor
// through the affine lattice, so invariance is structural.
class TestFunction {
 public:
  enum class Kind { Constant, ShortestVectorBump, SmoothedCount };

  static TestFunction constant(double value);
  static TestFunction shortest_vector_bump(double r0, double w);
  static TestFunction smoothed_count(double r_inner, double r_outer, double w);

  double operator()(const ReducedPoint& p) const;
  double operator()(const GroupElement& g) const { return (*this)(reduce(g)); }

  Kind kind() const { return kind_; }
  // Declared sup bound: 1 for the bump, |v| for constants, +infinity for the
  // count (it grows like sqrt(Im z) in the cusp; still square-integrable).
  double sup_bound() const { return sup_bound_; }
  std::string describe() const;

  // cache for Sobolev norm estimates, keyed by (degree, n, seed, h)
  using SobolevKey = std::tuple<int, std::int64_t, std::uint64_t, double>;
  std::map<SobolevKey, double>& sobolev_cache() const { return sobolev_cache_; }

 private:
  Kind kind_ = Kind::Constant;
  double p0_ = 0, p1_ = 0, p2_ = 0;
  double sup_bound_ = 0;
  mutable std::map<SobolevKey, double> sobolev_cache_;
};

// Deterministic sampler for the normalized invariant measure: z with density
// (3/pi) dx dy / y^2 on the fundamental domain (rejection from the strip),
// rotation uniform, torus coordinates uniform.  Value semantics; use
// stream(i) to derive independent streams for concurrent workers.
class HaarSampler {
 public:
  explicit HaarSampler(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  ReducedPoint operator()();
  std::complex<double> sample_z();  // just the hyperbolic coordinate

  HaarSampler stream(std::uint64_t idx) const { return HaarSampler(seed_, idx); }
  std::uint64_t seed() const { return seed_; }

  static constexpr double density_normalization() { return 3.0 / 3.14159265358979323846; }

 private:
  HaarSampler(std::uint64_t seed, std::uint64_t idx) : seed_(seed), rng_(Rng::stream(seed, idx)) {}
  std::uint64_t seed_;
  Rng rng_;
};

struct MonteCarlo {
  double estimate = 0;
  double std_error = 0;
  std::int64_t n = 0;
};

namespace detail {
struct MeanAccum {
  double sum = 0, sumsq = 0;
  std::int64_t n = 0;
  MeanAccum operator+(const MeanAccum& o) const { return {sum + o.sum, sumsq + o.sumsq, n + o.n}; }
};
}  // namespace detail

// Monte Carlo mean of fn over n Haar samples.  Chunked with one RNG stream
// per fixed-size chunk, so the result is bit-identical for any worker count.
template <class Fn>
MonteCarlo haar_integral_fn(Fn&& fn, std::int64_t n, const HaarSampler& base, int workers = 0) {
  constexpr std::int64_t kChunk = 1 << 13;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto parts = parallel_map_chunks(
      n_chunks,
      [&](std::int64_t c) {
        HaarSampler s = base.stream(static_cast<std::uint64_t>(c));
        const std::int64_t m = std::min(kChunk, n - c * kChunk);
        auto term = [&](std::int64_t) {
          const double v = fn(s());
          return detail::MeanAccum{v, v * v, 1};
        };
        return pairwise_sum(std::int64_t(0), m, term);
      },
      workers);
  const detail::MeanAccum total = pairwise_combine(std::span<const detail::MeanAccum>(parts));
  MonteCarlo out;
  out.n = total.n;
  out.estimate = total.sum / static_cast<double>(total.n);
  if (total.n > 1) {
    const double var =
        std::max(0.0, (total.sumsq - total.sum * out.estimate) / static_cast<double>(total.n - 1));
    out.std_error = std::sqrt(var / static_cast<double>(total.n));
  }
  return out;
}

MonteCarlo haar_integral(const TestFunction& f, std::int64_t n, const HaarSampler& base,
                         int workers = 0);

// Sobolev-norm proxy: max over n Haar samples of the sum over all monomials
// of degree <= d in the five generators of |central finite-difference Lie
// derivative|.  A lower bound for the true sup norm; degree <= 4 only.
double sobolev_proxy(const TestFunction& f, int degree, std::int64_t n_samples,
                     std::uint64_t seed, double h = 1e-5);

}  // namespace horolab
