#include "horolab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace horolab {

SieveTable::SieveTable(std::int64_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("SieveTable: limit must be >= 1");
  if (limit > 1000000000) throw std::invalid_argument("SieveTable: limit above 1e9 rejected");
  const std::size_t n = static_cast<std::size_t>(limit);
  spf_.assign(n + 1, 0);
  phi_.assign(n + 1, 0);
  mu_.assign(n + 1, 0);
  phi_[1] = 1;
  mu_[1] = 1;
  spf_[1] = 1;

  std::vector<std::uint32_t> primes;
  primes.reserve(n > 16 ? static_cast<std::size_t>(n / std::log(double(n)) * 1.2) : 8);
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      phi_[i] = static_cast<std::uint32_t>(i - 1);
      mu_[i] = -1;
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t v = static_cast<std::uint64_t>(p) * i;
      if (p > spf_[i] || v > n) break;
      spf_[v] = p;
      if (p == spf_[i]) {
        phi_[v] = phi_[i] * p;
        mu_[v] = 0;
      } else {
        phi_[v] = phi_[i] * (p - 1);
        mu_[v] = static_cast<std::int8_t>(-mu_[i]);
      }
    }
  }
}

std::size_t SieveTable::check(std::int64_t n) const {
  if (n < 1 || n > limit_) throw std::out_of_range("SieveTable: index outside table");
  return static_cast<std::size_t>(n);
}

int SieveTable::omega(std::int64_t n) const {
  check(n);
  int count = 0;
  while (n > 1) {
    const std::int64_t p = spf_[static_cast<std::size_t>(n)];
    ++count;
    while (n % p == 0) n /= p;
  }
  return count;
}

std::vector<std::int64_t> SieveTable::prime_factors(std::int64_t n) const {
  check(n);
  std::vector<std::int64_t> out;
  while (n > 1) {
    const std::int64_t p = spf_[static_cast<std::size_t>(n)];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  return out;
}

std::vector<std::int64_t> SieveTable::divisors(std::int64_t n) const {
  check(n);
  std::vector<std::int64_t> out{1};
  while (n > 1) {
    const std::int64_t p = spf_[static_cast<std::size_t>(n)];
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

std::int64_t SieveTable::next_prime(std::int64_t n) const {
  for (std::int64_t q = std::max<std::int64_t>(n, 2); q <= limit_; ++q)
    if (is_prime(q)) return q;
  throw std::out_of_range("next_prime: no prime found within table");
}

std::complex<double> full_exp_sum(std::int64_t q, std::int64_t m) {
  if (q < 1) throw std::invalid_argument("full_exp_sum: q must be >= 1");
  const std::int64_t mr = ((m % q) + q) % q;
  std::complex<double> acc = 0;
  for (std::int64_t p = 0; p < q; ++p)
    acc += e_unit(static_cast<double>((mr * p) % q) / static_cast<double>(q));
  return acc / static_cast<double>(q);
}

double ramanujan_sum(const SieveTable& sieve, std::int64_t q, std::int64_t k) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  const std::int64_t qk = q / std::gcd(q, ((k % q) + q) % q);  // gcd(q,0) = q
  return static_cast<double>(sieve.mu(qk)) / static_cast<double>(sieve.phi(qk));
}

std::complex<double> ramanujan_sum_direct(std::int64_t q, std::int64_t k) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum_direct: q must be >= 1");
  const std::int64_t kr = ((k % q) + q) % q;
  std::complex<double> acc = 0;
  std::int64_t count = 0;
  for (std::int64_t p = 0; p < q; ++p) {
    if (std::gcd(p, q) != 1) continue;
    acc += e_unit(static_cast<double>((kr * p) % q) / static_cast<double>(q));
    ++count;
  }
  return acc / static_cast<double>(count);
}

std::int64_t abs_ramanujan_row_sum_exact(const SieveTable& sieve, std::int64_t q) {
  // |S(q,r)| = |mu(q_r)|/phi(q_r); grouping r by d = q_r gives phi(d) values
  // each, so the row sum is sum_{d|q} mu(d)^2, i.e. 2^omega(q).
  return std::int64_t(1) << sieve.omega(q);
}

double abs_ramanujan_row_sum_direct(const SieveTable& sieve, std::int64_t q) {
  double acc = 0;
  for (std::int64_t r = 0; r < q; ++r) {
    const std::int64_t g = r == 0 ? q : std::gcd(q, r);
    const std::int64_t qr = q / g;
    acc += std::abs(static_cast<double>(sieve.mu(qr))) / static_cast<double>(sieve.phi(qr));
  }
  return acc;
}

std::vector<std::int64_t> coprime_residues(std::int64_t q, double a, double b) {
  if (q < 1) throw std::invalid_argument("coprime_residues: q must be >= 1");
  if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("coprime_residues: window must be finite");
  std::vector<std::int64_t> out;
  if (!(a < b)) return out;
  const double qa = a * static_cast<double>(q), qb = b * static_cast<double>(q);
  const std::int64_t lo = static_cast<std::int64_t>(std::ceil(qa));
  out.reserve(static_cast<std::size_t>(std::max(0.0, qb - qa)) + 2);
  for (std::int64_t p = lo; static_cast<double>(p) < qb; ++p)
    if (std::gcd(p, q) == 1) out.push_back(p);
  return out;
}

}  // namespace horolab
