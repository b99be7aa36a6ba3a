#include "horolab/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/quadrature.hpp"

namespace horolab {

namespace {
// sup |d/ds bump_profile(s)|, fixed by a fine scan (the profile is a library
// constant, not an input).
double bump_deriv_sup() {
  static const double value = [] {
    double best = 0;
    for (int i = 1; i < 200000; ++i) {
      const double s = -1.0 + 2.0 * i / 200000.0;
      const double d = 1.0 - s * s;
      if (d <= 0) continue;
      best = std::max(best, bump_profile(s) * std::abs(2 * s / (d * d)));
    }
    return best;
  }();
  return value;
}
}  // namespace

WeightFunction WeightFunction::smooth_bump(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("smooth_bump: need a < b");
  WeightFunction w;
  w.kind_ = Kind::SmoothBump;
  w.a_ = a;
  w.b_ = b;
  // int bump((2t - (a+b))/(b-a)) dt = (b-a)/2 * int_{-1}^{1} bump(s) ds
  static const double unit_mass = composite_gl([](double s) { return bump_profile(s); },
                                               -1.0, 1.0, 64, 16);
  w.integral_ = 0.5 * (b - a) * unit_mass;
  w.deriv_sup_ = bump_deriv_sup() * 2.0 / (b - a);
  return w;
}

WeightFunction WeightFunction::triangle(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("triangle: need a < b");
  WeightFunction w;
  w.kind_ = Kind::Triangle;
  w.a_ = a;
  w.b_ = b;
  w.integral_ = 0.5 * (b - a);
  w.deriv_sup_ = 2.0 / (b - a);
  return w;
}

WeightFunction WeightFunction::indicator(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("indicator: need a < b");
  WeightFunction w;
  w.kind_ = Kind::Indicator;
  w.a_ = a;
  w.b_ = b;
  w.integral_ = b - a;
  w.deriv_sup_ = 0;  // derivative vanishes a.e.; two jump discontinuities
  return w;
}

double WeightFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::SmoothBump:
      return bump_profile((2 * t - (a_ + b_)) / (b_ - a_));
    case Kind::Triangle: {
      const double s = std::abs(2 * t - (a_ + b_)) / (b_ - a_);
      return s >= 1 ? 0.0 : 1.0 - s;
    }
    case Kind::Indicator:
      return (t >= a_ && t < b_) ? 1.0 : 0.0;
  }
  return 0;
}

std::string WeightFunction::describe() const {
  const char* name = kind_ == Kind::SmoothBump ? "smooth"
                     : kind_ == Kind::Triangle ? "triangle"
                                               : "indicator";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s:%.17g,%.17g", name, a_, b_);
  return buf;
}

GaussLegendreCache::GaussLegendreCache() {
  const GaussLegendre rule(8);
  for (int i = 0; i < 8; ++i) {
    nodes[i] = rule.nodes[i];
    weights[i] = rule.weights[i];
  }
}

std::vector<MonteCarlo> discrepancy_square_means(const TestFunction& f, int max_log2,
                                                 std::int64_t n, const HaarSampler& base,
                                                 double haar_ref, int workers) {
  if (max_log2 < 0 || max_log2 > 20) throw std::invalid_argument("discrepancy_square_means: bad max_log2");
  const int n_levels = max_log2 + 1;
  const std::int64_t orbit = std::int64_t(1) << max_log2;

  struct Accum {
    double sum[24] = {0};
    double sumsq[24] = {0};
    std::int64_t n = 0;
    Accum operator+(const Accum& o) const {
      Accum r;
      for (int i = 0; i < 24; ++i) {
        r.sum[i] = sum[i] + o.sum[i];
        r.sumsq[i] = sumsq[i] + o.sumsq[i];
      }
      r.n = n + o.n;
      return r;
    }
  };

  constexpr std::int64_t kChunk = 1 << 10;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto parts = parallel_map_chunks(
      n_chunks,
      [&](std::int64_t c) {
        HaarSampler s = base.stream(static_cast<std::uint64_t>(c));
        const std::int64_t m = std::min(kChunk, n - c * kChunk);
        Accum acc;
        for (std::int64_t i = 0; i < m; ++i) {
          const GroupElement g = s().element();
          // one orbit, prefix means at the power-of-two cut points
          double prefix = 0;
          std::int64_t next_cut = 1;
          int level = 0;
          for (std::int64_t step = 0; step < orbit; ++step) {
            prefix += f(reduce(g * unipotent(static_cast<double>(step))));
            if (step + 1 == next_cut) {
              const double d = prefix / static_cast<double>(next_cut) - haar_ref;
              acc.sum[level] += d * d;
              acc.sumsq[level] += d * d * d * d;
              ++level;
              next_cut <<= 1;
            }
          }
          ++acc.n;
        }
        return acc;
      },
      workers);
  const Accum total = pairwise_combine(std::span<const Accum>(parts));

  std::vector<MonteCarlo> out(static_cast<std::size_t>(n_levels));
  for (int l = 0; l < n_levels; ++l) {
    MonteCarlo& mc = out[static_cast<std::size_t>(l)];
    mc.n = total.n;
    mc.estimate = total.sum[l] / static_cast<double>(total.n);
    if (total.n > 1) {
      const double var = std::max(
          0.0, (total.sumsq[l] - total.sum[l] * mc.estimate) / static_cast<double>(total.n - 1));
      mc.std_error = std::sqrt(var / static_cast<double>(total.n));
    }
  }
  return out;
}

MonteCarlo mixing_correlation(const TestFunction& f, const TestFunction& h, double t,
                              std::int64_t n, const HaarSampler& base, int workers) {
  if (n < 10000) throw std::invalid_argument("mixing_correlation: need n >= 1e4");
  constexpr std::int64_t kChunk = 1 << 13;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;  // rounded up to whole chunks
  const GroupElement flow = unipotent(t);

  struct CovAccum {
    double sum = 0, sumsq = 0;
    std::int64_t k = 0;
    CovAccum operator+(const CovAccum& o) const { return {sum + o.sum, sumsq + o.sumsq, k + o.k}; }
  };
  auto parts = parallel_map_chunks(
      n_chunks,
      [&](std::int64_t c) {
        HaarSampler s = base.stream(static_cast<std::uint64_t>(c));
        double sa = 0, sb = 0, sab = 0;
        for (std::int64_t i = 0; i < kChunk; ++i) {
          const ReducedPoint p = s();
          const double av = f(reduce(p.element() * flow));
          const double bv = h(p);
          sa += av;
          sb += bv;
          sab += av * bv;
        }
        const double m = static_cast<double>(kChunk);
        const double cov = (sab - sa * sb / m) / (m - 1);  // unbiased per chunk
        return CovAccum{cov, cov * cov, 1};
      },
      workers);
  const CovAccum total = pairwise_combine(std::span<const CovAccum>(parts));

  MonteCarlo out;
  out.n = n_chunks * kChunk;
  out.estimate = total.sum / static_cast<double>(total.k);
  if (total.k > 1) {
    const double var = std::max(
        0.0, (total.sumsq - total.sum * out.estimate) / static_cast<double>(total.k - 1));
    out.std_error = std::sqrt(var / static_cast<double>(total.k));
  }
  return out;
}

DecayFit fit_decay(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 points");
  DecayFit fit;
  fit.points.assign(points.begin(), points.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [param, err] : points) {
    if (!(param > 0) || !(err > 0))
      throw std::invalid_argument("fit_decay: parameters and errors must be positive");
    const double x = std::log(param), y = std::log(err);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  const double slope = cxy / vx;
  fit.delta_hat = -slope;
  fit.r2 = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

PartitionOfUnity::PartitionOfUnity(double step) : step_(step) {
  if (!(step > 0)) throw std::invalid_argument("PartitionOfUnity: step must be positive");
}

double PartitionOfUnity::term(std::int64_t j, double t) const {
  const double u = t - static_cast<double>(j) * step_;
  const double num = base(u);
  if (num == 0) return 0;
  // neighbours overlapping t: j0-1, j0, j0+1 cover all nonzero shifts
  const double jr = std::floor(t / step_);
  double den = 0;
  for (int d = -1; d <= 2; ++d) den += base(t - (jr + d) * step_);
  return num / den;
}

std::pair<std::int64_t, std::int64_t> PartitionOfUnity::support_indices(double t) const {
  const std::int64_t j0 = static_cast<std::int64_t>(std::floor(t / step_));
  return {j0 - 1, j0 + 2};
}

}  // namespace horolab
