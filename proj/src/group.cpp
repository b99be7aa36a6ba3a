#include "horolab/group.hpp"

#include <cmath>

namespace horolab {

CartanFactors cartan_of_unipotent(double t) {
  // M = [[1,t],[0,1]].  M M^T = [[1+t^2, t],[t, 1]] has eigenvalues
  // sigma^{+-2} with sigma - 1/sigma = |t|, so sigma = (|t| + sqrt(t^2+4))/2
  // and s = 2 log sigma = 2 asinh(|t|/2).
  const double at = std::abs(t);
  CartanFactors f;
  f.s = 2.0 * std::asinh(0.5 * at);
  if (at == 0) return f;

  const double sigma = 0.5 * (at + std::hypot(at, 2.0));

  // theta1 diagonalizes M M^T ([[p,r],[r,q]] with p-q = t^2, r = t); the
  // half-angle form puts the sigma^2 eigenvector in the first column.
  f.theta1 = 0.5 * std::atan2(2.0 * t, t * t);
  const double c1 = std::cos(f.theta1), s1 = std::sin(f.theta1);

  // From R(theta1)^T M = diag(sigma, 1/sigma) R(theta2):
  //   cos(theta2) = (R^T M)_00 / sigma,  sin(theta2) = (R^T M)_10 * sigma.
  f.theta2 = std::atan2(-s1 * sigma, c1 / sigma);
  return f;
}

double dist_proxy(const GroupElement& g1, const GroupElement& g2) {
  // g1^-1 g2 in extended precision.  The matrix quotient R = M1^-1 M2 is
  // formed first and the affine part as x2 - x1 R: for nearby pairs R is
  // near the identity, so the cancellations happen at small magnitudes even
  // when the inputs carry large entries (left translations up to ~1e3 keep
  // the proxy stable to ~1e-13 this way; the naive order loses 1e-9).
  const long double a1 = g1.m.a, b1 = g1.m.b, c1 = g1.m.c, d1 = g1.m.d;
  const long double a2 = g2.m.a, b2 = g2.m.b, c2 = g2.m.c, d2 = g2.m.d;
  // adjugate of g1.m (det 1)
  const long double ia = d1, ib = -b1, ic = -c1, id = a1;

  const long double r00 = ia * a2 + ib * c2;
  const long double r01 = ia * b2 + ib * d2;
  const long double r10 = ic * a2 + id * c2;
  const long double r11 = ic * b2 + id * d2;

  const long double vx = g2.x.x - (g1.x.x * r00 + g1.x.y * r10);
  const long double vy = g2.x.y - (g1.x.x * r01 + g1.x.y * r11);

  const long double coords[6] = {r00 - 1.0L, r01, r10, r11 - 1.0L, vx, vy};
  long double best = 0;
  for (long double c : coords) {
    const long double a = c < 0 ? -c : c;
    if (a > best) best = a;
  }
  return static_cast<double>(best);
}

}  // namespace horolab
