#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace horolab {

// 2x2 real matrix, row-major [[a,b],[c,d]].
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }
  double det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }

  // Inverse of a determinant-1 matrix: the adjugate.  Exact in floating
  // point (only negations), which the distance proxy relies on.
  Mat2 inv_unimodular() const { return {d, -b, -c, a}; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }

  double max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)),
                    std::max(std::abs(c), std::abs(d)));
  }
  bool finite() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
  }
};

// Row 2-vector; the affine part of a group element and lattice coordinates
// are row vectors acting on the right: v * M.
struct Vec2 {
  double x = 0, y = 0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  double max_abs() const { return std::max(std::abs(x), std::abs(y)); }
};

inline Vec2 operator*(const Vec2& v, const Mat2& m) {
  return {v.x * m.a + v.y * m.c, v.x * m.b + v.y * m.d};
}

// Element (M, x) of the affine group SL(2,R) x| R^2 acting on row vectors,
// with multiplication (M,x)(M',x') = (MM', xM' + x') and identity (I,(0,0)).
struct GroupElement {
  Mat2 m;
  Vec2 x;

  static GroupElement identity() { return {}; }
  bool finite() const { return m.finite() && std::isfinite(x.x) && std::isfinite(x.y); }
};

// Kahan's fma determinant: accurate to ~1.5 ulp of the result even when
// a*d and b*c cancel, unlike the naive expression whose absolute error
// grows like |entries|^2 * eps.
inline double det_accurate(const Mat2& m) {
  const double w = m.b * m.c;
  const double e = std::fma(m.b, m.c, -w);
  const double f = std::fma(m.a, m.d, -w);
  return f - e;
}

// Determinant drift after long products is pulled back onto SL(2) by a
// scalar renormalization; |det-1| stays below 1e-12 over 1e8-step loops.
// The cheap determinant decides first so the fma path only runs when the
// entries are large enough to make it unreliable.
inline Mat2 renormalized(const Mat2& m) {
  if (std::abs(m.det() - 1.0) <= 1e-13) return m;
  const double det = det_accurate(m);
  if (std::abs(det - 1.0) > 1e-13 && det > 0) return m * (1.0 / std::sqrt(det));
  return m;
}

inline GroupElement mul(const GroupElement& g, const GroupElement& h) {
  return {renormalized(g.m * h.m), g.x * h.m + h.x};
}

inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return mul(g, h); }

// (M,x)^-1 = (M^-1, -x M^-1)
inline GroupElement inverse(const GroupElement& g) {
  const Mat2 mi = g.m.inv_unimodular();
  return {mi, -(g.x * mi)};
}

// --- one-parameter subgroups -------------------------------------------------

// upper-triangular unipotent [[1,t],[0,1]]; the horocycle direction
inline GroupElement unipotent(double t) { return {{1, t, 0, 1}, {0, 0}}; }

// diagonal flow diag(e^{s/2}, e^{-s/2})
inline GroupElement geodesic(double s) {
  const double e = std::exp(0.5 * s);
  return {{e, 0, 0, 1 / e}, {0, 0}};
}

// scaling(y) = geodesic(log y) = diag(sqrt(y), 1/sqrt(y)); y > 0
inline GroupElement scaling(double y) {
  if (!(y > 0)) throw std::invalid_argument("scaling: y must be positive");
  const double r = std::sqrt(y);
  return {{r, 0, 0, 1 / r}, {0, 0}};
}

// rotation [[cos,-sin],[sin,cos]]
inline GroupElement rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c, -s, s, c}, {0, 0}};
}

// --- Lie algebra basis -------------------------------------------------------

// Basis of sl(2,R) + R^2: upper shear, lower shear, diagonal, and the two
// translations.  All five have closed-form exponentials.
enum class Generator { UpperShear, LowerShear, Diagonal, TranslateX, TranslateY };

inline constexpr Generator kGenerators[5] = {
    Generator::UpperShear, Generator::LowerShear, Generator::Diagonal,
    Generator::TranslateX, Generator::TranslateY};

inline GroupElement exp_generator(Generator g, double t) {
  switch (g) {
    case Generator::UpperShear: return unipotent(t);
    case Generator::LowerShear: return {{1, 0, t, 1}, {0, 0}};
    case Generator::Diagonal:   return geodesic(2 * t);  // exp(t diag(1,-1))
    case Generator::TranslateX: return {{1, 0, 0, 1}, {t, 0}};
    case Generator::TranslateY: return {{1, 0, 0, 1}, {0, t}};
  }
  std::abort();
}

// --- Cartan factors of the unipotent ----------------------------------------

struct CartanFactors {
  double theta1 = 0;  // left rotation angle
  double s = 0;       // diagonal-flow time, >= 0
  double theta2 = 0;  // right rotation angle
};

// unipotent(t) = rotation(theta1) * geodesic(s) * rotation(theta2), computed
// from the singular values of [[1,t],[0,1]]: sigma_max = e^{s/2}.
CartanFactors cartan_of_unipotent(double t);

inline GroupElement cartan_reconstruct(const CartanFactors& f) {
  return rotation(f.theta1) * geodesic(f.s) * rotation(f.theta2);
}

// --- distance proxy ----------------------------------------------------------

// Max-norm of the six coordinates of g1^-1 g2 measured from the identity;
// a proxy for a left-invariant metric near the identity.  Left-invariant by
// construction.  The product is taken in extended precision so that the
// proxy stays stable under left translations with entries up to ~1e3.
double dist_proxy(const GroupElement& g1, const GroupElement& g2);

// Max-norm distance of g from the identity over the six coordinates.
inline double embed_dist_from_identity(const GroupElement& g) {
  return std::max((g.m - Mat2::identity()).max_abs(), g.x.max_abs());
}

// Relative max-norm residual between two elements, scaled by the larger
// coordinate magnitude (>= 1).
inline double rel_residual(const GroupElement& g, const GroupElement& h) {
  const double scale = std::max({1.0, g.m.max_abs(), g.x.max_abs(), h.m.max_abs(), h.x.max_abs()});
  return std::max((g.m - h.m).max_abs(), (g.x - h.x).max_abs()) / scale;
}

}  // namespace horolab
