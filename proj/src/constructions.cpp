#include "polydense/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "polydense/error.hpp"
#include "polydense/json_format.hpp"
#include "polydense/parallel.hpp"

namespace polydense {
namespace {

constexpr std::uint64_t kMaxBasePrimeBound = std::uint64_t{1} << 26;
constexpr long double kGapExponent = 23.0L / 42.0L;

std::uint64_t interval_end(std::uint64_t n, unsigned alpha) {
  const auto end = checked_power(n + 1, alpha);
  require(end.has_value(), "(n+1)^alpha overflows 2^63 - 1 for n = " + std::to_string(n) +
                               ", alpha = " + std::to_string(alpha));
  return *end;
}

}  // namespace

std::optional<std::uint64_t> checked_power(std::uint64_t n, unsigned alpha) {
  unsigned __int128 value = 1;
  for (unsigned i = 0; i < alpha; ++i) {
    value *= n;
    if (value > kDomainMax) return std::nullopt;
  }
  return static_cast<std::uint64_t>(value);
}

IntervalPrimeFinder::IntervalPrimeFinder(std::uint64_t max_end)
    : base_bound_(std::min(isqrt(max_end), kMaxBasePrimeBound)),
      base_primes_(simple_primes(static_cast<std::uint32_t>(base_bound_))) {}

std::optional<std::uint64_t> IntervalPrimeFinder::find(std::uint64_t n, unsigned alpha) const {
  require(n >= 1, "interval index n must be >= 1");
  require(alpha >= 2, "interval exponent alpha must be >= 2");
  const std::uint64_t hi = interval_end(n, alpha);
  const std::uint64_t lo = *checked_power(n, alpha);
  return smallest_prime_in_interval(lo, hi, base_primes_, base_bound_);
}

std::optional<std::uint64_t> prime_in_interval(std::uint64_t n, unsigned alpha) {
  require(n >= 1, "interval index n must be >= 1");
  require(alpha >= 2, "interval exponent alpha must be >= 2");
  return IntervalPrimeFinder(interval_end(n, alpha)).find(n, alpha);
}

Example2Set build_example2_set(unsigned alpha, std::uint64_t n_max, unsigned workers) {
  require(alpha >= 3, "the one-prime-per-interval construction needs alpha >= 3");
  require(n_max >= 1, "n_max must be >= 1");
  const std::uint64_t top = interval_end(n_max, alpha);
  const IntervalPrimeFinder finder(top);

  std::vector<std::uint64_t> found(static_cast<std::size_t>(n_max), 0);
  parallel_chunks(found.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (auto p = finder.find(i + 1, alpha)) found[i] = *p;
    }
  });

  Example2Set result;
  result.alpha = alpha;
  result.n_max = n_max;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i] == 0) {
      result.complete = false;
      result.empty_interval = i + 1;
      break;
    }
    result.set.elements.push_back(found[i]);
  }
  // S consists of primes, so pi_S(x) = card{s in S : s <= x}.
  const auto& s = result.set.elements;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint64_t n = i + 1;
    const std::uint64_t x = *checked_power(n + 1, alpha);
    const auto pi = static_cast<std::uint64_t>(std::upper_bound(s.begin(), s.end(), x) - s.begin());
    result.rows.push_back({n, s[i], static_cast<double>(pi) / static_cast<double>(n + 1)});
  }
  if (!result.rows.empty()) result.final_ratio = result.rows.back().ratio;
  return result;
}

GapCheck gap_check_iwaniec_pintz(const PrimeSieve& sieve, std::uint64_t N) {
  require(N >= 2, "gap check needs N >= 2");
  require(N <= sieve.limit(), "gap check bound " + std::to_string(N) + " exceeds sieve limit " +
                                  std::to_string(sieve.limit()));
  GapCheck result;
  result.N = N;
  for (std::uint64_t n = 2; n <= N; ++n) {
    const long double nd = static_cast<long double>(n);
    const long double left = nd - std::pow(nd, kGapExponent);
    const auto floor_left = static_cast<std::uint64_t>(std::floor(std::max(left, 0.0L)));
    const std::uint64_t count = sieve.prime_count(n) - sieve.prime_count(floor_left);
    ++result.checked;
    if (count == 0) {
      if (result.pass) result.first_failure = n;
      result.pass = false;
      ++result.failures;
    }
    if (result.worst_n == 0 || count < result.worst_count) {
      result.worst_n = n;
      result.worst_count = count;
    }
  }
  return result;
}

nlohmann::ordered_json example2_to_json(const Example2Set& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["n_max"] = r.n_max;
  j["all_intervals_nonempty"] = r.complete;
  j["empty_interval"] = r.empty_interval;
  j["final_ratio"] = r.final_ratio;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["n"] = row.n;
    o["p_n"] = row.prime;
    o["ratio"] = row.ratio;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_example2_csv(const Example2Set& r, std::ostream& out) {
  out << "n,p_n,ratio\n";
  for (const auto& row : r.rows) out << row.n << ',' << row.prime << ',' << format_double(row.ratio) << '\n';
}

nlohmann::ordered_json gap_check_to_json(const GapCheck& r) {
  nlohmann::ordered_json j;
  j["N"] = r.N;
  j["exponent"] = "23/42";
  j["pass"] = r.pass;
  j["checked"] = r.checked;
  j["failures"] = r.failures;
  j["first_failure"] = r.first_failure;
  j["worst_n"] = r.worst_n;
  j["worst_count"] = r.worst_count;
  return j;
}

}  // namespace polydense
