#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "polydense/sequences.hpp"
#include "polydense/sieve.hpp"

namespace polydense {

/// n^alpha, or nullopt when it exceeds 2^63 - 1.
std::optional<std::uint64_t> checked_power(std::uint64_t n, unsigned alpha);

/// Finds the smallest prime in (n^alpha, (n+1)^alpha] by segmented sieving.
/// Holds base primes up to sqrt of the largest interval end it was sized for;
/// intervals beyond that fall back to Miller-Rabin per candidate.
class IntervalPrimeFinder {
 public:
  /// Sized for intervals ending at or below `max_end`.
  explicit IntervalPrimeFinder(std::uint64_t max_end);

  std::optional<std::uint64_t> find(std::uint64_t n, unsigned alpha) const;

 private:
  std::uint64_t base_bound_;
  std::vector<std::uint32_t> base_primes_;
};

/// Smallest prime p with n^alpha < p <= (n+1)^alpha, or nullopt if none.
/// Throws PreconditionError if (n+1)^alpha overflows the 63-bit domain.
std::optional<std::uint64_t> prime_in_interval(std::uint64_t n, unsigned alpha);

struct Example2Row {
  std::uint64_t n;
  std::uint64_t prime;
  /// pi_S(x) / x^(1/alpha) at x = (n+1)^alpha.
  double ratio;
};

/// One prime per interval (n^alpha, (n+1)^alpha] for n = 1..n_max.
struct Example2Set {
  unsigned alpha = 3;
  std::uint64_t n_max = 0;
  bool complete = true;
  /// First n whose interval holds no prime (0 when none).
  std::uint64_t empty_interval = 0;
  ExplicitList set;
  std::vector<Example2Row> rows;
  double final_ratio = 0.0;
};

Example2Set build_example2_set(unsigned alpha, std::uint64_t n_max, unsigned workers = 1);

struct GapCheck {
  bool pass = true;
  std::uint64_t N = 0;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t first_failure = 0;
  /// n with the fewest primes in (n - n^(23/42), n]; ties go to smaller n.
  std::uint64_t worst_n = 0;
  std::uint64_t worst_count = 0;
};

/// For every n in [2, N], counts primes in (n - n^(23/42), n].
GapCheck gap_check_iwaniec_pintz(const PrimeSieve& sieve, std::uint64_t N);

nlohmann::ordered_json example2_to_json(const Example2Set& result);
/// CSV `n,p_n,ratio`.
void write_example2_csv(const Example2Set& result, std::ostream& out);
nlohmann::ordered_json gap_check_to_json(const GapCheck& result);

}  // namespace polydense
