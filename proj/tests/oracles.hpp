#pragma once

// Test-only reference implementations. They share no code with the library
// and favour obviousness over speed.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// (prime, exponent) pairs by trial division.
inline std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t prime_count(std::uint64_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t k = 2; k <= n; ++k) count += is_prime(k) ? 1 : 0;
  return count;
}

/// Q(n) evaluated term by term with explicit powers (no Horner).
inline __int128 evaluate(const std::vector<std::int64_t>& c, std::int64_t n) {
  __int128 total = 0;
  __int128 power = 1;
  for (auto coefficient : c) {
    total += static_cast<__int128>(coefficient) * power;
    power *= n;
  }
  return total;
}

inline std::uint64_t root_count(const std::vector<std::int64_t>& c, std::uint64_t p) {
  std::uint64_t roots = 0;
  for (std::uint64_t r = 0; r < p; ++r) {
    __int128 v = evaluate(c, static_cast<std::int64_t>(r)) % static_cast<__int128>(p);
    if (v == 0) ++roots;
  }
  return roots;
}

/// Primes <= prime_bound dividing |Q(n)| for some 1 <= n <= index_bound.
inline std::vector<std::uint64_t> polynomial_prime_divisors(const std::vector<std::int64_t>& c,
                                                            std::uint64_t index_bound, std::uint64_t prime_bound) {
  std::vector<bool> seen(prime_bound + 1, false);
  for (std::uint64_t n = 1; n <= index_bound; ++n) {
    __int128 v = evaluate(c, static_cast<std::int64_t>(n));
    if (v < 0) v = -v;
    if (v == 0) continue;
    for (std::uint64_t p = 2; p <= prime_bound; ++p) {
      if (is_prime(p) && v % p == 0) seen[p] = true;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= prime_bound; ++p) {
    if (seen[p]) out.push_back(p);
  }
  return out;
}

}  // namespace oracle
