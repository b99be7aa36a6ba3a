#include "horolab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace horolab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Working matrix for the reduction loop.  Gauss-reduction intermediates
// (the Mobius denominators and the translation products) reach the square
// of the input magnitude; extended precision keeps the reduced coordinates
// well-defined on lattice cosets to ~1e-12 for translations up to ~1e3.
struct WorkMat {
  long double a, b, c, d;
};

std::complex<double> mobius_at_i(const WorkMat& m) {
  // z = (a i + b) / (c i + d)
  const long double den = m.c * m.c + m.d * m.d;
  return {static_cast<double>((m.b * m.d + m.a * m.c) / den),
          static_cast<double>(1.0L / den)};
}
}  // namespace

bool in_fundamental_domain(std::complex<double> z, double tol) {
  return std::abs(z.real()) <= 0.5 + tol && std::norm(z) >= 1.0 - tol;
}

ReducedPoint reduce(const GroupElement& g) {
  if (!g.finite()) throw std::invalid_argument("reduce: non-finite input");

  WorkMat w{g.m.a, g.m.b, g.m.c, g.m.d};
  Mat2 gm = Mat2::identity();  // integer-valued reducing matrix
  std::complex<double> z = mobius_at_i(w);

  auto translate = [&](double n) {  // left-multiply by [[1,-n],[0,1]]
    w.a -= static_cast<long double>(n) * w.c;
    w.b -= static_cast<long double>(n) * w.d;
    gm.a -= n * gm.c; gm.b -= n * gm.d;
    z = mobius_at_i(w);
  };
  auto invert = [&]() {  // left-multiply by S = [[0,-1],[1,0]]
    w = WorkMat{-w.c, -w.d, w.a, w.b};
    gm = Mat2{-gm.c, -gm.d, gm.a, gm.b};
    z = mobius_at_i(w);
  };

  // Gauss reduction: translate Re z into [-1/2, 1/2), invert while |z| < 1.
  // Row operations are exact on the integer gamma; m is recomputed each step
  // so z carries no accumulated roundoff.  The 1e-15 margin stops the
  // S-inversion from ping-ponging when z sits on the unit circle to rounding.
  int iter = 0;
  for (;; ++iter) {
    if (iter > 10000) throw std::runtime_error("reduce: iteration cap exceeded");
    const double n = std::floor(z.real() + 0.5);
    if (n != 0) translate(n);
    if (std::norm(z) >= 1.0 - 1e-15) break;
    invert();
  }
  // boundary tie: |z| = 1 with Re z > 0 belongs to the Re <= 0 edge via S
  if (std::abs(std::norm(z) - 1.0) <= 1e-15 && z.real() > 0) invert();

  Mat2 m{static_cast<double>(w.a), static_cast<double>(w.b),
         static_cast<double>(w.c), static_cast<double>(w.d)};

  // Iwasawa angle of the reduced matrix; -I is a lattice element identifying
  // theta with theta + pi, so fold into [0, pi) for a unique representative.
  const double sy = std::sqrt(z.imag());
  // k = a(y)^-1 n(-x) m
  const double k00 = (m.a - z.real() * m.c) / sy;
  const double k10 = m.c * sy;
  double theta = std::atan2(k10, k00);      // in (-pi, pi]
  if (theta < 0 || theta >= kPi) {
    theta += theta < 0 ? kPi : -kPi;
    m = -m;
    gm = -gm;
  }

  ReducedPoint p;
  p.m_red = m;
  p.z = z;
  p.theta = theta;

  // Affine part: original x in the reduced lattice basis, shifted to [0,1)^2.
  const Mat2 mi = m.inv_unimodular();
  const Vec2 y = g.x * mi;
  const double f1 = std::floor(y.x), f2 = std::floor(y.y);
  p.x_red = {y.x - f1, y.y - f2};
  if (p.x_red.x >= 1.0) p.x_red.x = 0.0;  // rounding at the top edge
  if (p.x_red.y >= 1.0) p.x_red.y = 0.0;
  p.gamma = GroupElement{gm, Vec2{-f1, -f2} * gm};
  return p;
}

double shortest_affine_vector(const ReducedPoint& p) {
  const Vec2 r1 = p.basis_row1(), r2 = p.basis_row2();
  double best = std::numeric_limits<double>::infinity();
  for (int k1 = -8; k1 <= 8; ++k1) {
    const double c1 = k1 + p.x_red.x;
    const Vec2 a{c1 * r1.x, c1 * r1.y};
    for (int k2 = -8; k2 <= 8; ++k2) {
      const double c2 = k2 + p.x_red.y;
      const double vx = a.x + c2 * r2.x, vy = a.y + c2 * r2.y;
      best = std::min(best, vx * vx + vy * vy);
    }
  }
  return std::sqrt(best);
}

double bump_profile(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double smoothstep(double s) {
  if (s <= 0) return 0;
  if (s >= 1) return 1;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

namespace {

// edge weight rising over [center-w, center+w], antisymmetric about center;
// the antisymmetry makes the smoothed count's mean exact for annuli.
double rising_edge(double r, double center, double w) {
  return smoothstep((r - (center - w)) / (2 * w));
}

}  // namespace

double smoothed_lattice_count(const ReducedPoint& p, double r_inner, double r_outer, double w) {
  const double reach = r_outer + w;
  const Vec2 b1 = p.basis_row1(), b2 = p.basis_row2();

  // |k1 + x1| <= reach * |b2| (covolume 1); the admissible k2 per k1 comes
  // from a quadratic, so skew cusp bases cost only what they contain.
  const double lim1 = reach * b2.norm();
  const std::int64_t k1_lo = static_cast<std::int64_t>(std::ceil(-p.x_red.x - lim1));
  const std::int64_t k1_hi = static_cast<std::int64_t>(std::floor(-p.x_red.x + lim1));

  const double b22 = b2.norm2();
  double acc = 0;
  for (std::int64_t k1 = k1_lo; k1 <= k1_hi; ++k1) {
    const double c1 = static_cast<double>(k1) + p.x_red.x;
    const Vec2 base{c1 * b1.x, c1 * b1.y};
    // |base + tau b2|^2 <= reach^2 for tau = k2 + x2
    const double pb = base.x * b2.x + base.y * b2.y;
    const double disc = pb * pb - b22 * (base.norm2() - reach * reach);
    if (disc < 0) continue;
    const double sq = std::sqrt(disc);
    const double t_lo = (-pb - sq) / b22, t_hi = (-pb + sq) / b22;
    const std::int64_t k2_lo = static_cast<std::int64_t>(std::ceil(t_lo - p.x_red.y));
    const std::int64_t k2_hi = static_cast<std::int64_t>(std::floor(t_hi - p.x_red.y));
    for (std::int64_t k2 = k2_lo; k2 <= k2_hi; ++k2) {
      const double c2 = static_cast<double>(k2) + p.x_red.y;
      const double vx = base.x + c2 * b2.x, vy = base.y + c2 * b2.y;
      const double r = std::hypot(vx, vy);
      double wgt = 1.0 - rising_edge(r, r_outer, w);  // falling outer edge
      if (r_inner > 0) wgt *= rising_edge(r, r_inner, w);
      acc += wgt;
    }
  }
  return acc;
}

TestFunction TestFunction::constant(double value) {
  TestFunction f;
  f.kind_ = Kind::Constant;
  f.p0_ = value;
  f.sup_bound_ = std::abs(value);
  return f;
}

TestFunction TestFunction::shortest_vector_bump(double r0, double w) {
  if (!(w > 0)) throw std::invalid_argument("shortest_vector_bump: width must be positive");
  TestFunction f;
  f.kind_ = Kind::ShortestVectorBump;
  f.p0_ = r0;
  f.p1_ = w;
  f.sup_bound_ = 1.0;
  return f;
}

TestFunction TestFunction::smoothed_count(double r_inner, double r_outer, double w) {
  if (!(w > 0) || !(r_outer > 0)) throw std::invalid_argument("smoothed_count: bad parameters");
  if (r_inner > 0 && !(r_inner - w > 0 && r_inner + w < r_outer - w))
    throw std::invalid_argument("smoothed_count: annulus edges overlap");
  TestFunction f;
  f.kind_ = Kind::SmoothedCount;
  f.p0_ = r_inner;
  f.p1_ = r_outer;
  f.p2_ = w;
  f.sup_bound_ = std::numeric_limits<double>::infinity();
  return f;
}

double TestFunction::operator()(const ReducedPoint& p) const {
  switch (kind_) {
    case Kind::Constant: return p0_;
    case Kind::ShortestVectorBump:
      return bump_profile((shortest_affine_vector(p) - p0_) / p1_);
    case Kind::SmoothedCount:
      return smoothed_lattice_count(p, p0_, p1_, p2_);
  }
  return 0;
}

std::string TestFunction::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::Constant: std::snprintf(buf, sizeof(buf), "const:%.17g", p0_); break;
    case Kind::ShortestVectorBump: std::snprintf(buf, sizeof(buf), "bump:%.17g,%.17g", p0_, p1_); break;
    case Kind::SmoothedCount: std::snprintf(buf, sizeof(buf), "count:%.17g,%.17g,%.17g", p0_, p1_, p2_); break;
  }
  return buf;
}

std::complex<double> HaarSampler::sample_z() {
  // proposal: x uniform on [-1/2,1/2), y with density y0/y^2 on [y0, inf),
  // y0 = sqrt(3)/2; accept inside the fundamental domain (acceptance
  // probability pi*sqrt(3)/6 ~ 0.9069).
  const double y0 = 0.86602540378443864676;
  for (;;) {
    const double x = rng_.next_double() - 0.5;
    double u = rng_.next_double();
    if (u == 0.0) u = 0x1.0p-53;
    const double y = y0 / u;
    if (x * x + y * y >= 1.0) return {x, y};
  }
}

ReducedPoint HaarSampler::operator()() {
  const std::complex<double> z = sample_z();
  const double theta = kPi * rng_.next_double();  // [0, pi): -I identifies theta and theta+pi
  const Vec2 xr{rng_.next_double(), rng_.next_double()};

  const double sy = std::sqrt(z.imag());
  const double c = std::cos(theta), s = std::sin(theta);
  // n(x) a(y) k(theta)
  const Mat2 m{sy * c + z.real() * s / sy, -sy * s + z.real() * c / sy,
               s / sy, c / sy};
  ReducedPoint p;
  p.m_red = m;
  p.x_red = xr;
  p.gamma = GroupElement::identity();
  p.z = z;
  p.theta = theta;
  return p;
}

MonteCarlo haar_integral(const TestFunction& f, std::int64_t n, const HaarSampler& base,
                         int workers) {
  if (n < 100) throw std::invalid_argument("haar_integral: need n >= 100");
  return haar_integral_fn([&](const ReducedPoint& p) { return f(p); }, n, base, workers);
}

namespace {

// f(g * prod exp(+-h X_i)) difference tensor for one monomial word.
double word_derivative(const TestFunction& f, const GroupElement& g,
                       const std::vector<int>& word, const GroupElement steps[5][2],
                       double h) {
  const int k = static_cast<int>(word.size());
  double acc = 0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    GroupElement arg = g;
    int sign = 1;
    for (int j = 0; j < k; ++j) {
      const bool plus = (mask >> j) & 1;
      arg = arg * steps[word[static_cast<std::size_t>(j)]][plus ? 0 : 1];
      if (!plus) sign = -sign;
    }
    acc += sign * f(arg);
  }
  return acc / std::pow(2 * h, k);
}

void all_words(int max_deg, std::vector<std::vector<int>>& out) {
  out.push_back({});  // degree 0: the identity operator
  std::vector<std::vector<int>> level{{}};
  for (int d = 1; d <= max_deg; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& w : level)
      for (int i = 0; i < 5; ++i) {
        auto v = w;
        v.push_back(i);
        next.push_back(v);
        out.push_back(std::move(v));
      }
    level = std::move(next);
  }
}

}  // namespace

double sobolev_proxy(const TestFunction& f, int degree, std::int64_t n_samples,
                     std::uint64_t seed, double h) {
  if (degree < 0 || degree > 4)
    throw std::invalid_argument("sobolev_proxy: degree must be in [0,4]");
  const TestFunction::SobolevKey key{degree, n_samples, seed, h};
  if (auto it = f.sobolev_cache().find(key); it != f.sobolev_cache().end()) return it->second;

  GroupElement steps[5][2];
  for (int i = 0; i < 5; ++i) {
    steps[i][0] = exp_generator(kGenerators[i], h);
    steps[i][1] = exp_generator(kGenerators[i], -h);
  }
  std::vector<std::vector<int>> words;
  all_words(degree, words);

  HaarSampler sampler(seed);
  double best = 0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const GroupElement g = sampler().element();
    double total = 0;
    for (const auto& w : words) total += std::abs(word_derivative(f, g, w, steps, h));
    best = std::max(best, total);
  }
  f.sobolev_cache()[key] = best;
  return best;
}

}  // namespace horolab
