#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace horolab {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on
// the Legendre polynomial from the Chebyshev initial guess.
struct GaussLegendre {
  std::vector<double> nodes, weights;

  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1 - x * x) * dp * dp);
    }
  }
};

// Composite Gauss-Legendre over [a,b] with `panels` panels of `order` nodes.
template <class F>
double composite_gl(F&& f, double a, double b, int panels, int order) {
  static thread_local int cached_order = -1;
  static thread_local GaussLegendre rule(16);
  if (order != cached_order) {
    rule = GaussLegendre(order);
    cached_order = order;
  }
  const double h = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    double acc = 0;
    for (int i = 0; i < order; ++i)
      acc += rule.weights[i] * f(lo + 0.5 * h * (rule.nodes[i] + 1.0));
    total += acc * 0.5 * h;
  }
  return total;
}

}  // namespace horolab
