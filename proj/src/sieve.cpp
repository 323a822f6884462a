#include "polydense/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "polydense/error.hpp"
#include "polydense/parallel.hpp"

namespace polydense {
namespace {

using u128 = unsigned __int128;

constexpr std::uint32_t kTrialBound = 65536;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t sub_abs(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool miller_rabin(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sinclair's seven bases: deterministic for all n < 2^64.
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    a %= n;
    if (a == 0) continue;
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint32_t> simple_primes(std::uint32_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return primes;
}

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  constexpr std::uint64_t kBatch = 128;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const std::uint64_t steps = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = mulmod(q, sub_abs(x, y), n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      // Batched gcd overshot; replay one step at a time from the saved point.
      do {
        ys = f(ys);
        g = std::gcd(sub_abs(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

std::size_t PrimeSieve::estimated_bytes(const SieveOptions& options) {
  const std::size_t words = static_cast<std::size_t>(options.limit / 64 + 1);
  std::size_t bytes = words * (sizeof(std::uint64_t) + sizeof(std::uint32_t));
  if (options.smallest_factor_table) bytes += static_cast<std::size_t>(options.limit + 1) * sizeof(std::uint32_t);
  return bytes;
}

PrimeSieve::PrimeSieve(const SieveOptions& options) : limit_(options.limit) {
  require(options.limit >= 2, "sieve limit must be >= 2, got " + std::to_string(options.limit));
  const std::size_t bytes = estimated_bytes(options);
  require(bytes <= options.memory_budget_bytes,
          "sieve limit " + std::to_string(options.limit) + " needs " + std::to_string(bytes) +
              " bytes, over the memory budget of " + std::to_string(options.memory_budget_bytes) + " bytes");
  require(!options.smallest_factor_table || options.limit < (std::uint64_t{1} << 32),
          "smallest-prime-factor table requires sieve limit < 2^32");

  const std::size_t segment = std::max<std::size_t>(64, (options.segment_size + 63) / 64 * 64);
  const std::uint64_t root = isqrt(limit_);
  const auto base = simple_primes(static_cast<std::uint32_t>(root));

  const std::size_t words = static_cast<std::size_t>(limit_ / 64 + 1);
  bits_.assign(words, 0);
  if (options.smallest_factor_table) spf_.assign(static_cast<std::size_t>(limit_ + 1), 0);

  const std::uint64_t span = limit_ + 1;
  const std::size_t segments = static_cast<std::size_t>((span + segment - 1) / segment);

  // Segments start at multiples of 64, so each one owns whole words of bits_.
  parallel_chunks(segments, options.workers, [&](std::size_t first, std::size_t last) {
    std::vector<std::uint8_t> composite(segment);
    for (std::size_t s = first; s < last; ++s) {
      const std::uint64_t lo = static_cast<std::uint64_t>(s) * segment;
      const std::uint64_t hi = std::min<std::uint64_t>(span, lo + segment);
      std::fill(composite.begin(), composite.end(), 0);
      for (std::uint32_t p : base) {
        const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp >= hi) break;
        std::uint64_t m = std::max(pp, (lo + p - 1) / p * p);
        for (; m < hi; m += p) {
          if (!spf_.empty() && spf_[m] == 0) spf_[m] = p;
          composite[m - lo] = 1;
        }
      }
      for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n) {
        if (composite[n - lo]) continue;
        bits_[n >> 6] |= std::uint64_t{1} << (n & 63);
        if (!spf_.empty()) spf_[n] = static_cast<std::uint32_t>(n);
      }
    }
  });

  word_rank_.resize(words);
  std::uint32_t running = 0;
  for (std::size_t w = 0; w < words; ++w) {
    word_rank_[w] = running;
    running += static_cast<std::uint32_t>(std::popcount(bits_[w]));
  }
  trial_primes_ = simple_primes(kTrialBound);
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n <= limit_) return bit(n);
  return miller_rabin(n);
}

std::vector<std::uint64_t> PrimeSieve::primes_up_to(std::uint64_t bound) const {
  require(bound <= limit_, "bound " + std::to_string(bound) + " exceeds sieve limit " + std::to_string(limit_));
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  primes.reserve(static_cast<std::size_t>(prime_count(bound)));
  for (std::size_t w = 0; w <= bound >> 6; ++w) {
    std::uint64_t word = bits_[w];
    while (word != 0) {
      const std::uint64_t n = (static_cast<std::uint64_t>(w) << 6) + std::countr_zero(word);
      if (n > bound) return primes;
      primes.push_back(n);
      word &= word - 1;
    }
  }
  return primes;
}

std::uint64_t PrimeSieve::prime_count(std::uint64_t n) const {
  require(n <= limit_, "n " + std::to_string(n) + " exceeds sieve limit " + std::to_string(limit_));
  const std::size_t w = static_cast<std::size_t>(n >> 6);
  const unsigned shift = static_cast<unsigned>(n & 63);
  const std::uint64_t mask = shift == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (shift + 1)) - 1);
  return word_rank_[w] + static_cast<std::uint64_t>(std::popcount(bits_[w] & mask));
}

std::uint64_t PrimeSieve::smallest_prime_factor(std::uint64_t n) const {
  require(n >= 2 && n <= limit_, "smallest_prime_factor: n must lie in [2, " + std::to_string(limit_) + "]");
  if (!spf_.empty()) return spf_[n];
  if (bit(n)) return n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (bit(p) && n % p == 0) return p;
  }
  return n;
}

Factorization PrimeSieve::factorize(std::uint64_t n) const {
  require(n != 0, "cannot factorize 0 (0 is never an element of S)");
  Factorization result{.value = n, .factors = {}};
  std::vector<std::uint64_t> found;
  std::uint64_t m = n;

  if (!spf_.empty() && m <= limit_) {
    while (m > 1) {
      const std::uint64_t p = spf_[m];
      found.push_back(p);
      m /= p;
    }
  } else {
    for (std::uint32_t p : trial_primes_) {
      if (static_cast<std::uint64_t>(p) * p > m) break;
      if (m <= limit_ && bit(m)) break;
      while (m % p == 0) {
        found.push_back(p);
        m /= p;
      }
    }
    // Any composite left has all prime factors above kTrialBound.
    std::vector<std::uint64_t> pending;
    if (m > 1) pending.push_back(m);
    while (!pending.empty()) {
      const std::uint64_t v = pending.back();
      pending.pop_back();
      if (v < static_cast<std::uint64_t>(kTrialBound + 1) * (kTrialBound + 1) || is_prime(v)) {
        found.push_back(v);
        continue;
      }
      const std::uint64_t d = pollard_brent(v);
      pending.push_back(d);
      pending.push_back(v / d);
    }
  }

  std::sort(found.begin(), found.end());
  for (std::uint64_t p : found) {
    if (!result.factors.empty() && result.factors.back().prime == p) {
      ++result.factors.back().exponent;
    } else {
      result.factors.push_back({p, 1});
    }
  }
  return result;
}

PrimeSieve build_sieve(std::uint64_t limit, const SieveOptions& base) {
  SieveOptions options = base;
  options.limit = limit;
  return PrimeSieve(options);
}

std::optional<std::uint64_t> smallest_prime_in_interval(std::uint64_t lo, std::uint64_t hi,
                                                        const std::vector<std::uint32_t>& base_primes,
                                                        std::uint64_t base_bound) {
  constexpr std::uint64_t kSegment = 1 << 12;
  std::vector<std::uint8_t> composite(kSegment);
  for (std::uint64_t a = lo + 1; a <= hi && a > lo;) {
    const std::uint64_t b = (hi - a < kSegment - 1) ? hi : a + kSegment - 1;
    const std::uint64_t root = isqrt(b);
    if (root > base_bound) {
      for (std::uint64_t m = a; m <= b; ++m) {
        if (miller_rabin(m)) return m;
        if (m == b) break;
      }
    } else {
      std::fill(composite.begin(), composite.end(), 0);
      for (std::uint32_t p : base_primes) {
        if (p > root) break;
        const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        std::uint64_t m = std::max(pp, (a + p - 1) / p * p);
        for (; m <= b; m += p) composite[m - a] = 1;
      }
      for (std::uint64_t m = a; m <= b; ++m) {
        if (m >= 2 && !composite[m - a]) return m;
        if (m == b) break;
      }
    }
    if (b == hi) break;
    a = b + 1;
  }
  return std::nullopt;
}

}  // namespace polydense
