#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace polydense {

/// Largest value admitted into any sequence window.
inline constexpr std::uint64_t kDomainMax = (std::uint64_t{1} << 63) - 1;

inline constexpr std::uint64_t kDefaultSieveLimit = 100'000'000;
inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

struct SieveOptions {
  std::uint64_t limit = kDefaultSieveLimit;
  std::size_t segment_size = kDefaultSegmentSize;
  /// Also build the smallest-prime-factor table (4 bytes per entry).
  bool smallest_factor_table = false;
  std::size_t memory_budget_bytes = kDefaultMemoryBudget;
  unsigned workers = 1;
};

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Complete factorization; primes strictly ascending, empty iff value == 1.
struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;
  bool operator==(const Factorization&) const = default;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool miller_rabin(std::uint64_t n);

std::uint64_t isqrt(std::uint64_t n);

/// Primality and (optionally) smallest-prime-factor tables over [0, limit],
/// built segment by segment. Immutable after construction.
class PrimeSieve {
 public:
  explicit PrimeSieve(const SieveOptions& options);
  explicit PrimeSieve(std::uint64_t limit) : PrimeSieve(SieveOptions{.limit = limit}) {}

  std::uint64_t limit() const { return limit_; }
  bool has_smallest_factor_table() const { return !spf_.empty(); }

  /// Sieve lookup when n <= limit(), Miller-Rabin above.
  bool is_prime(std::uint64_t n) const;
  std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) const;
  /// Classical pi(n).
  std::uint64_t prime_count(std::uint64_t n) const;
  /// Smallest prime factor of n for 2 <= n <= limit().
  std::uint64_t smallest_prime_factor(std::uint64_t n) const;
  Factorization factorize(std::uint64_t n) const;

  /// Bytes needed for a sieve with these options.
  static std::size_t estimated_bytes(const SieveOptions& options);

 private:
  bool bit(std::uint64_t n) const { return (bits_[n >> 6] >> (n & 63)) & 1u; }

  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> word_rank_;  // primes strictly below word start
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> trial_primes_;
};

/// Convenience wrapper mirroring PrimeSieve(limit); throws PreconditionError
/// for limit < 2 or a limit whose tables exceed the memory budget.
PrimeSieve build_sieve(std::uint64_t limit, const SieveOptions& base = {});

/// Nontrivial factor of an odd composite n (Pollard rho, Brent cycle
/// detection). The polynomial constant starts at 1 and increments on failure.
std::uint64_t pollard_brent(std::uint64_t n);

/// Plain sieve of Eratosthenes over [2, bound] for small helper tables.
std::vector<std::uint32_t> simple_primes(std::uint32_t bound);

/// Smallest prime in (lo, hi], found by sieving consecutive segments of the
/// interval. base_primes must be exactly the primes <= base_bound, ascending.
/// A segment whose end exceeds base_bound^2 is finished with Miller-Rabin.
std::optional<std::uint64_t> smallest_prime_in_interval(std::uint64_t lo, std::uint64_t hi,
                                                        const std::vector<std::uint32_t>& base_primes,
                                                        std::uint64_t base_bound);

}  // namespace polydense
