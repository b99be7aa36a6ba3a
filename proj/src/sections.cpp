#include "horolab/sections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace horolab {

HorocycleSection HorocycleSection::zero() {
  HorocycleSection s;
  s.family_ = Family::Zero;
  s.period_ = 1.0;  // n(t+1) = unipotent(1) n(t)
  return s;
}

HorocycleSection HorocycleSection::parabolic() {
  HorocycleSection s;
  s.family_ = Family::Parabolic;
  s.period_ = 2.0;  // n(t+2) = ([[1,2],[0,1]], (1,1)) n(t)
  return s;
}

HorocycleSection HorocycleSection::constant(double c1, double c2, Rationality r) {
  HorocycleSection s;
  s.family_ = Family::Constant;
  s.c1_ = c1;
  s.c2_ = c2;
  s.const_rationality_ = r;
  return s;
}

HorocycleSection HorocycleSection::constant_rational(std::int64_t p1, std::int64_t q1,
                                                     std::int64_t p2, std::int64_t q2) {
  if (q1 <= 0 || q2 <= 0) throw std::invalid_argument("constant_rational: denominators must be positive");
  HorocycleSection s;
  s.family_ = Family::Constant;
  s.c1_ = static_cast<double>(p1) / static_cast<double>(q1);
  s.c2_ = static_cast<double>(p2) / static_cast<double>(q2);
  s.const_rationality_ = Rationality::Rational;
  // minimal integer period P with xi_1 * P integral
  s.period_ = static_cast<double>(q1 / std::gcd(std::abs(p1) == 0 ? q1 : std::abs(p1), q1));
  return s;
}

HorocycleSection HorocycleSection::custom(std::function<Vec2(double)> xi) {
  HorocycleSection s;
  s.family_ = Family::Custom;
  s.custom_ = std::move(xi);
  return s;
}

Vec2 HorocycleSection::xi(double t) const {
  switch (family_) {
    case Family::Zero: return {0, 0};
    case Family::Constant: return {c1_, c2_};
    case Family::Parabolic: return {0.5 * t, -0.25 * t * t};
    case Family::Custom: return custom_(t);
  }
  return {0, 0};
}

GroupElement HorocycleSection::at(double t) const {
  const Vec2 v = xi(t);
  // (I, xi) * u(t) = ([[1,t],[0,1]], (xi_1, t xi_1 + xi_2))
  return {{1, t, 0, 1}, {v.x, t * v.x + v.y}};
}

double HorocycleSection::lambda(double t) const {
  const Vec2 v = xi(t);
  return t * v.x + v.y;
}

std::optional<bool> HorocycleSection::rationally_linear() const {
  switch (family_) {
    case Family::Zero: return true;       // Lambda == 0
    case Family::Parabolic: return false; // Lambda = t^2/4 meets any line in <= 2 points
    case Family::Constant:
      if (const_rationality_ == Rationality::Unknown) return std::nullopt;
      return const_rationality_ == Rationality::Rational;
    case Family::Custom: return std::nullopt;
  }
  return std::nullopt;
}

SectionWindow HorocycleSection::window(double alpha, double beta) const {
  if (!(alpha < beta)) throw std::invalid_argument("window: need alpha < beta");
  SectionWindow w;
  w.alpha = alpha;
  w.beta = beta;
  w.length_scale = std::max({std::abs(alpha), std::abs(beta), 1.0});
  w.width = beta - alpha;

  const double end = std::max(std::abs(alpha), std::abs(beta));
  switch (family_) {
    case Family::Zero:
      w.a_xi = 0;
      break;
    case Family::Constant:
      // |xi_1| plus Lambda' = xi_1
      w.a_xi = 2 * std::abs(c1_);
      break;
    case Family::Parabolic:
      // sup|t/2| + sup|Lambda'| with Lambda = t^2/4
      w.a_xi = 0.5 * end + 0.5 * end;
      break;
    case Family::Custom: {
      // sup|xi_1| on a grid; Lipschitz constant of Lambda estimated as the
      // max |Lambda'| by central differences on a 1e4-point grid with one
      // 10x refinement pass around the maximizer.
      const int n = 10000;
      const double step = (beta - alpha) / n;
      double sup_xi1 = 0, sup_dl = 0, arg_dl = alpha;
      for (int i = 0; i <= n; ++i) {
        const double t = alpha + i * step;
        sup_xi1 = std::max(sup_xi1, std::abs(xi(t).x));
        const double h = step * 0.5;
        const double dl = std::abs(lambda(t + h) - lambda(t - h)) / (2 * h);
        if (dl > sup_dl) { sup_dl = dl; arg_dl = t; }
      }
      const double lo = std::max(alpha, arg_dl - step), hi = std::min(beta, arg_dl + step);
      const double fine = (hi - lo) / 100;
      for (int i = 0; i <= 100; ++i) {
        const double t = lo + i * fine;
        const double h = fine * 0.5;
        const double dl = std::abs(lambda(t + h) - lambda(t - h)) / (2 * h);
        sup_dl = std::max(sup_dl, dl);
      }
      w.a_xi = sup_xi1 + sup_dl;
      break;
    }
  }
  return w;
}

std::string HorocycleSection::describe() const {
  switch (family_) {
    case Family::Zero: return "zero";
    case Family::Parabolic: return "parabolic";
    case Family::Constant: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "constant:%.17g,%.17g", c1_, c2_);
      return buf;
    }
    case Family::Custom: return "custom";
  }
  return "?";
}

}  // namespace horolab
