#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace horolab {

// e(x) = exp(2 pi i x), with the argument range-reduced mod 1 first (IEEE
// remainder is exact) so the phase stays accurate for large x.
inline std::complex<double> e_unit(double x) {
  const double r = std::remainder(x, 1.0);
  const double a = 2.0 * 3.14159265358979323846 * r;
  return {std::cos(a), std::sin(a)};
}

// Linear sieve for smallest prime factor, Euler phi and Mobius mu up to a
// fixed limit; everything else is answered by walking spf.
class SieveTable {
 public:
  explicit SieveTable(std::int64_t limit);  // limit <= 1e9, else throws

  std::int64_t limit() const { return limit_; }
  std::int64_t phi(std::int64_t n) const { return phi_[check(n)]; }
  int mu(std::int64_t n) const { return mu_[check(n)]; }
  std::int64_t smallest_prime_factor(std::int64_t n) const { return spf_[check(n)]; }
  bool is_prime(std::int64_t n) const { return n >= 2 && spf_[check(n)] == n; }

  // number of distinct prime factors
  int omega(std::int64_t n) const;
  // distinct prime factors in increasing order
  std::vector<std::int64_t> prime_factors(std::int64_t n) const;
  // all divisors (unsorted beyond construction order)
  std::vector<std::int64_t> divisors(std::int64_t n) const;
  // smallest prime >= n (n + gap must stay within the table)
  std::int64_t next_prime(std::int64_t n) const;

 private:
  std::size_t check(std::int64_t n) const;
  std::int64_t limit_;
  std::vector<std::uint32_t> spf_, phi_;
  std::vector<std::int8_t> mu_;
};

// (1/q) sum_{p=0}^{q-1} e(m p / q): 1 if q | m, else 0.  Phases are computed
// from the integer residue (m p mod q), so the identity is exact to rounding.
std::complex<double> full_exp_sum(std::int64_t q, std::int64_t m);

// Normalized Ramanujan sum S(q,k) = (1/phi(q)) sum_{(p,q)=1} e(k p / q)
// evaluated through the closed form mu(q_k)/phi(q_k), q_k = q/gcd(q,k).
double ramanujan_sum(const SieveTable& sieve, std::int64_t q, std::int64_t k);

// The same sum evaluated directly; the test oracle for the closed form.
std::complex<double> ramanujan_sum_direct(std::int64_t q, std::int64_t k);

// sum_{r=0}^{q-1} |S(q,r)| as an exact integer: sum_{d|q} mu(d)^2 = 2^omega(q).
std::int64_t abs_ramanujan_row_sum_exact(const SieveTable& sieve, std::int64_t q);
inline double abs_ramanujan_row_sum(const SieveTable& sieve, std::int64_t q) {
  return static_cast<double>(abs_ramanujan_row_sum_exact(sieve, q));
}
// Direct evaluation sum_r |mu(q_r)|/phi(q_r); oracle for the closed form.
double abs_ramanujan_row_sum_direct(const SieveTable& sieve, std::int64_t q);

// Integers p with gcd(p,q) = 1 and p/q in the half-open window [a, b).
std::vector<std::int64_t> coprime_residues(std::int64_t q, double a, double b);

}  // namespace horolab
