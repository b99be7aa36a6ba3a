#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "horolab/ensembles.hpp"
#include "horolab/rng.hpp"

using namespace horolab;

namespace {
constexpr double kPi = 3.14159265358979323846;
const TestFunction kBump = TestFunction::shortest_vector_bump(0.7, 0.2);
}  // namespace

TEST_CASE("weight functions") {
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  CHECK(tri.integral() == doctest::Approx(1.0));
  CHECK(tri(1.0) == doctest::Approx(1.0));
  CHECK(tri(0.5) == doctest::Approx(0.5));
  CHECK(tri(2.5) == 0.0);
  CHECK(tri.w1_inf() == doctest::Approx(2.0));
  CHECK(tri.width() == 2);
  CHECK(tri.length_scale() == 2);

  const WeightFunction ind = WeightFunction::indicator(-1, 3);
  CHECK(ind.integral() == doctest::Approx(4.0));
  CHECK(ind(0.0) == 1.0);
  CHECK(ind(3.0) == 0.0);
  CHECK(ind.w1_inf() == doctest::Approx(1.0));

  const WeightFunction sm = WeightFunction::smooth_bump(0, 2);
  CHECK(sm(1.0) == doctest::Approx(1.0));
  CHECK(sm(0.0) == 0.0);
  // independent Simpson oracle for the mass of the profile
  double simpson = 0;
  const int panels = 20000;
  for (int i = 0; i < panels; ++i) {
    const double a = 2.0 * i / panels, b = 2.0 * (i + 1) / panels;
    simpson += (b - a) / 6.0 * (sm(a) + 4.0 * sm(0.5 * (a + b)) + sm(b));
  }
  CHECK(sm.integral() == doctest::Approx(simpson).epsilon(1e-9));
  CHECK(sm.deriv_sup_norm() > 0);
  CHECK_THROWS_AS(WeightFunction::triangle(1, 1), std::invalid_argument);
}

TEST_CASE("nonprimitive average: Riemann sum bound for constant f") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  auto one = [](const ReducedPoint&) { return 1.0; };
  for (std::int64_t n : {100, 1000}) {
    const double avg = nonprimitive_average(par, one, tri, n);
    // (W+1) ||psi'||_inf / N with W = 2, ||psi'|| = 1
    CHECK(std::abs(avg - 1.0) <= 3.0 / static_cast<double>(n));
  }
}

TEST_CASE("primitive average of constant f converges like 1/q") {
  SieveTable sieve(20000);
  const WeightFunction psi = WeightFunction::smooth_bump(0, 1);
  const HorocycleSection par = HorocycleSection::parabolic();
  auto one = [](const ReducedPoint&) { return 1.0; };
  double prev_err_times_q = 0;
  for (std::int64_t q : {101, 1009, 10007}) {
    const double err = std::abs(primitive_average(par, one, psi, sieve, q) - psi.integral());
    CHECK(err <= 2 * psi.w1_inf() / static_cast<double>(q));
    prev_err_times_q = err * static_cast<double>(q);
  }
  CHECK(prev_err_times_q < 1.0);  // measured ~0.60: the q^{-1+eps} rate
}

TEST_CASE("primitive with q=1 equals nonprimitive with N=1") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(-0.5, 3.5);
  SieveTable sieve(10);
  const double prim = primitive_average(par, kBump, tri, sieve, 1);
  const double nonprim = nonprimitive_average(par, kBump, tri, 1);
  CHECK(prim == nonprim);
}

TEST_CASE("twisted average degenerate twists") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  const std::int64_t n = 500;

  const std::vector<double> twists = {0.0, static_cast<double>(n), 0.37 * n};
  const auto vals = twisted_average(par, kBump, tri, n, twists, std::nullopt);
  const double untwisted = nonprimitive_average(par, kBump, tri, n);

  // c = 0 is exactly the untwisted sum
  CHECK(vals[0].real() == doctest::Approx(untwisted).epsilon(1e-14));
  CHECK(std::abs(vals[0].imag()) < 1e-14);
  // c = N is the trivial character again
  CHECK(std::abs(vals[1] - vals[0]) < 1e-10);
  // a generic twist differs
  CHECK(std::abs(vals[2] - vals[0]) > 1e-6);
}

TEST_CASE("ensemble averages are linear in f and psi") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  const WeightFunction ind = WeightFunction::indicator(0, 2);
  const std::int64_t n = 500;
  const TestFunction f1 = TestFunction::shortest_vector_bump(0.7, 0.2);
  const TestFunction f2 = TestFunction::smoothed_count(0, 1.1, 0.05);

  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    auto combo = [&](const ReducedPoint& p) { return a * f1(p) + b * f2(p); };
    const double lhs = nonprimitive_average(par, combo, tri, n);
    const double rhs = a * nonprimitive_average(par, f1, tri, n) +
                       b * nonprimitive_average(par, f2, tri, n);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  // linearity in psi across kinds sharing a window
  const auto [k_lo, k_hi] = index_window(tri, n);
  const GroupElement shrink = scaling(1.0 / static_cast<double>(n));
  const double both = deterministic_sum(
                          k_lo, k_hi,
                          [&](std::int64_t k) {
                            const double t = static_cast<double>(k) / static_cast<double>(n);
                            return f1(reduce(par.at(t) * shrink)) * (tri(t) + ind(t));
                          },
                          0) /
                      static_cast<double>(n);
  CHECK(nonprimitive_average(par, f1, tri, n) + nonprimitive_average(par, f1, ind, n) ==
        doctest::Approx(both).epsilon(1e-12));
}

TEST_CASE("mean-zero reduction device") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  const std::int64_t n = 2000;
  const double ref = 0.1875;  // any constant shift works for the identity
  auto centered = [&](const ReducedPoint& p) { return kBump(p) - ref; };
  const double avg = nonprimitive_average(par, kBump, tri, n);
  const double avg0 = nonprimitive_average(par, centered, tri, n);
  // avg - ref*int(psi) = avg0 + ref*(riemann(psi) - int(psi))
  const double riemann_gap = 3.0 / static_cast<double>(n);
  CHECK(std::abs((avg - ref * tri.integral()) - avg0) <= ref * riemann_gap + 1e-12);
}

TEST_CASE("ensemble sums are identical for any worker count") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  const double w1 = nonprimitive_average(par, kBump, tri, 3000, 1);
  const double w3 = nonprimitive_average(par, kBump, tri, 3000, 3);
  CHECK(w1 == w3);

  SieveTable sieve(200);
  CHECK(primitive_average(par, kBump, tri, sieve, 101, 1) ==
        primitive_average(par, kBump, tri, sieve, 101, 2));
}

TEST_CASE("continuous average basics") {
  const HorocycleSection par = HorocycleSection::parabolic();
  auto one = [](const ReducedPoint&) { return 1.0; };
  const QuadResult q = continuous_average(par, one, 0, 2, 0.25, 256);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q.refinement_delta < 1e-13);
  CHECK_THROWS_AS(continuous_average(par, one, 0, 2, 0.25, 32), std::invalid_argument);
  CHECK_THROWS_AS(continuous_average(par, one, 2, 0, 0.25, 256), std::invalid_argument);
}

TEST_CASE("continuous average: closed horocycle as a negative control") {
  // On the zero section the affine part never moves: an affine-sensitive
  // observable sees nothing, an SL(2)-only observable equidistributes.
  const HorocycleSection zero = HorocycleSection::zero();
  const QuadResult bump_avg = continuous_average(zero, kBump, 0, 1, 1e-3, 1 << 15);
  CHECK(bump_avg.value == 0.0);  // the coset contains the origin everywhere

  const TestFunction count = TestFunction::smoothed_count(2.0, 3.0, 0.05);
  const QuadResult count_avg = continuous_average(zero, count, 0, 1, 1e-3, 1 << 17);
  const double area = kPi * 5.0;  // its Haar mean, exactly
  CHECK(std::abs(count_avg.value - area) < 0.5);
}

TEST_CASE("continuous average: expanding parabolic loops approach the Haar mean") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const MonteCarlo ref = haar_integral(kBump, 400000, HaarSampler(1));
  const QuadResult q = continuous_average(par, kBump, 0, 2, 1e-4, 1 << 18);
  CHECK(std::abs(q.value - ref.estimate) <= 5 * ref.std_error + 0.05);
}

TEST_CASE("discrepancy operator") {
  HaarSampler s(17);
  const ReducedPoint x = s();
  const double ref = 0.2;
  CHECK(discrepancy(kBump, x, 1, ref) == doctest::Approx(kBump(x) - ref).epsilon(1e-15));
  auto one = [](const ReducedPoint&) { return 1.0; };
  for (std::int64_t m : {1, 5, 32}) CHECK(discrepancy(one, x, m, 1.0) == 0.0);
}

TEST_CASE("discrepancy square means fall with M") {
  const MonteCarlo ref = haar_integral(kBump, 400000, HaarSampler(2));
  const auto means = discrepancy_square_means(kBump, 4, 4000, HaarSampler(33), ref.estimate);
  REQUIRE(means.size() == 5);
  CHECK(means[0].estimate > 0);
  CHECK(means[4].estimate < means[0].estimate);  // M=16 well below M=1
}

TEST_CASE("mixing correlation basics") {
  const MonteCarlo at0 = mixing_correlation(kBump, kBump, 0, 50000, HaarSampler(3));
  CHECK(at0.estimate > 3 * at0.std_error);  // variance of a non-constant f

  const TestFunction one = TestFunction::constant(1);
  const MonteCarlo flat = mixing_correlation(one, one, 5, 50000, HaarSampler(3));
  CHECK(std::abs(flat.estimate) <= 1e-12);

  CHECK_THROWS_AS(mixing_correlation(kBump, kBump, 0, 100, HaarSampler(3)),
                  std::invalid_argument);

  const MonteCarlo w1 = mixing_correlation(kBump, kBump, 2, 20000, HaarSampler(3), 1);
  const MonteCarlo w2 = mixing_correlation(kBump, kBump, 2, 20000, HaarSampler(3), 2);
  CHECK(w1.estimate == w2.estimate);
}

TEST_CASE("decay fitting") {
  const std::vector<std::pair<double, double>> exact = {{10, 1e-1}, {100, 1e-2}, {1000, 1e-3}};
  const DecayFit f1 = fit_decay(exact);
  CHECK(f1.delta_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f1.r2 == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<std::pair<double, double>> flat = {{10, 5}, {100, 5}, {1000, 5}};
  CHECK(fit_decay(flat).delta_hat == doctest::Approx(0.0));

  // refitting the stored points reproduces the exponent
  const DecayFit refit = fit_decay(f1.points);
  CHECK(refit.delta_hat == doctest::Approx(f1.delta_hat).epsilon(1e-12));

  // noisy synthetic power law with exponent 1/2
  Rng rng(8);
  std::vector<std::pair<double, double>> noisy;
  for (int i = 0; i < 40; ++i) {
    const double p = std::pow(10.0, 1.0 + 0.1 * i);
    const double noise = std::exp(0.05 * (2 * rng.next_double() - 1));
    noisy.emplace_back(p, std::pow(p, -0.5) * noise);
  }
  const double d = fit_decay(noisy).delta_hat;
  CHECK(d > 0.4);
  CHECK(d < 0.6);

  CHECK_THROWS_AS(fit_decay(std::vector<std::pair<double, double>>{{1, 1}, {2, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_decay(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 1}}),
                  std::invalid_argument);
}

TEST_CASE("partition of unity") {
  for (double step : {0.5, 2.0, 0.37}) {
    const PartitionOfUnity pu(step);
    for (double t : {-3.7, -0.2, 0.0, 0.1, 1.9, 12.34}) {
      const auto [j_lo, j_hi] = pu.support_indices(t);
      double total = 0;
      for (std::int64_t j = j_lo - 1; j <= j_hi + 1; ++j) total += pu.term(j, t);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  // psi * Delta_j summed over j reproduces psi
  const PartitionOfUnity pu(0.5);
  const WeightFunction tri = WeightFunction::triangle(0, 2);
  for (double t = -0.3; t < 2.3; t += 0.01) {
    double total = 0;
    const auto [j_lo, j_hi] = pu.support_indices(t);
    for (std::int64_t j = j_lo; j <= j_hi; ++j) total += tri(t) * pu.term(j, t);
    CHECK(total == doctest::Approx(tri(t)).epsilon(1e-10));
  }

  // product-rule bound ||psi Delta_j||_{W^{1,inf}} <= (1 + ||Delta'||) ||psi||_{W^{1,inf}}
  double delta_deriv = 0;
  for (double t = -0.6; t < 0.6; t += 1e-4)
    delta_deriv = std::max(delta_deriv,
                           std::abs(pu.term(0, t + 5e-5) - pu.term(0, t - 5e-5)) / 1e-4);
  double prod_w1 = 0;
  for (double t = -0.6; t < 2.6; t += 1e-4) {
    const auto val = [&](double u) { return tri(u) * pu.term(2, u); };
    prod_w1 = std::max(prod_w1, std::abs(val(t)));
    prod_w1 = std::max(prod_w1, std::abs(val(t + 5e-5) - val(t - 5e-5)) / 1e-4);
  }
  CHECK(prod_w1 <= (1 + delta_deriv) * tri.w1_inf() + 1e-6);

  CHECK_THROWS_AS(PartitionOfUnity(0), std::invalid_argument);
}

TEST_CASE("twisted average with a fixed generic twist decays") {
  const HorocycleSection par = HorocycleSection::parabolic();
  const WeightFunction psi = WeightFunction::smooth_bump(0, 2);
  const MonteCarlo ref = haar_integral(kBump, 200000, HaarSampler(6));
  const std::vector<double> twist = {0.37};
  std::vector<std::pair<double, double>> pts;
  for (std::int64_t n : {1000, 10000, 100000}) {
    const auto v = twisted_average(par, kBump, psi, n, twist, ref.estimate);
    pts.emplace_back(static_cast<double>(n), std::abs(v[0]));
  }
  CHECK(fit_decay(pts).delta_hat >= 0.1);
}

TEST_CASE("fourier mechanism on a band-limited weight") {
  // primitive averages of a trigonometric polynomial recombine exactly
  // through the normalized Ramanujan sums
  SieveTable sieve(64);
  Rng rng(12);
  const int band = 8;
  std::vector<std::complex<double>> coef(band + 1);
  coef[0] = rng.uniform(-1, 1);
  for (int k = 1; k <= band; ++k) coef[k] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  auto poly = [&](double t) {
    double v = coef[0].real();
    for (int k = 1; k <= band; ++k) v += 2.0 * (coef[k] * e_unit(k * t)).real();
    return v;
  };
  double worst = 0;
  for (std::int64_t q = 1; q <= 20; ++q) {
    double direct = 0;
    for (std::int64_t p : coprime_residues(q, -0.5, 0.5))
      direct += poly(static_cast<double>(p) / static_cast<double>(q));
    direct /= static_cast<double>(sieve.phi(q));
    double decomp = coef[0].real();
    for (int k = 1; k <= band; ++k)
      decomp += 2.0 * coef[k].real() * ramanujan_sum(sieve, q, k);
    worst = std::max(worst, std::abs(direct - decomp));
  }
  CHECK(worst < 1e-8);
}
