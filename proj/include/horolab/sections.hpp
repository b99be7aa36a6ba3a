#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "horolab/group.hpp"

namespace horolab {

// Whether the displacement of a section is (mathematically) rational.  This
// cannot be read off a double, so built-in constructors carry it as an
// annotation and custom sections report Unknown.
enum class Rationality { Rational, Irrational, Unknown };

struct DiophantineMeta {
  double type_k;    // Diophantine type K >= 3/2
  double constant;  // the constant c > 0 in the ||xi - m/q|| > c q^{-K} label
};

struct SectionWindow {
  double alpha = 0;
  double beta = 0;
  double length_scale = 1;  // max(|alpha|, |beta|, 1)
  double width = 0;         // beta - alpha
  double a_xi = 0;          // sup |xi_1| + Lipschitz constant of Lambda on [alpha,beta]
};

// A horocycle section t -> (I, xi(t)) * unipotent(t), together with the
// quantities the estimators need: Lambda(t) = t xi_1(t) + xi_2(t), window
// constants, period and rational-linearity classification.
class HorocycleSection {
 public:
  enum class Family { Zero, Constant, Parabolic, Custom };

  static HorocycleSection zero();
  static HorocycleSection parabolic();  // xi(t) = (t/2, -t^2/4), period 2
  static HorocycleSection constant(double c1, double c2, Rationality r);
  // exact rational displacement (p1/q1, p2/q2), q1,q2 > 0
  static HorocycleSection constant_rational(std::int64_t p1, std::int64_t q1,
                                            std::int64_t p2, std::int64_t q2);
  static HorocycleSection custom(std::function<Vec2(double)> xi);

  Family family() const { return family_; }
  Vec2 xi(double t) const;
  GroupElement at(double t) const;     // (I, xi(t)) * unipotent(t)
  double lambda(double t) const;       // t*xi_1(t) + xi_2(t)

  // true/false for the built-in families, nullopt ("unknown") for custom:
  // the predicate is not decidable from samples.
  std::optional<bool> rationally_linear() const;

  std::optional<double> period() const { return period_; }
  std::optional<DiophantineMeta> diophantine() const { return diophantine_; }
  HorocycleSection& annotate_diophantine(DiophantineMeta m) {
    diophantine_ = m;
    return *this;
  }

  // A(xi) on [alpha,beta]: analytic for the built-in families, a refined
  // grid estimate of sup|Lambda'| for custom ones.
  SectionWindow window(double alpha, double beta) const;

  std::string describe() const;

 private:
  HorocycleSection() = default;
  Family family_ = Family::Zero;
  double c1_ = 0, c2_ = 0;  // constant family components
  Rationality const_rationality_ = Rationality::Rational;
  std::optional<double> period_;
  std::optional<DiophantineMeta> diophantine_;
  std::function<Vec2(double)> custom_;
};

}  // namespace horolab
