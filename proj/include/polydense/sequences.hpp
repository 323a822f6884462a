#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polydense {

/// S = { |Q(n)| : n >= 1 } \ {0}. Coefficients in ascending degree order.
struct PolynomialRange {
  std::vector<std::int64_t> coefficients;
  bool operator==(const PolynomialRange&) const = default;
};

/// S = { a n + b : n >= 1 }.
struct ArithmeticProgression {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  bool operator==(const ArithmeticProgression&) const = default;
};

/// S = { 2^n : n >= 1 }.
struct PowersOfTwo {
  bool operator==(const PowersOfTwo&) const = default;
};

enum class BlockParity { odd, even };

/// Doubly exponential blocks B_k = [2^(2^k), 2^(2^(k+1))). The odd selector is
/// the union of B_k over odd k; the even selector is its complement in the
/// positive integers, i.e. {1} plus every even block.
struct ZelinskyLacunary {
  BlockParity parity = BlockParity::odd;
  bool operator==(const ZelinskyLacunary&) const = default;
};

/// S = { 3n + k(n) : n >= 1 } with k(n) in {1, 2} drawn from a seeded
/// mt19937_64 stream (the n-th draw decides k(n)). Stands in for a set whose
/// offsets are not computable.
struct PseudoRandomOffset {
  std::uint64_t seed = 0;
  bool operator==(const PseudoRandomOffset&) const = default;
};

/// Strictly increasing positive integers.
struct ExplicitList {
  std::vector<std::uint64_t> elements;
  bool operator==(const ExplicitList&) const = default;
};

using SequenceSpec =
    std::variant<PolynomialRange, ArithmeticProgression, PowersOfTwo, ZelinskyLacunary, PseudoRandomOffset, ExplicitList>;

/// Throws PreconditionError if the spec breaks its invariants.
void validate(const SequenceSpec& spec);

/// Canonical text form: `poly:1,0,1`, `ap:4,1`, `pow2`, `zelinsky`,
/// `zelinsky:even`, `surrogate:7`, `list:2,3,5` or `list:@path`.
SequenceSpec parse_sequence(std::string_view text);
std::string render_sequence(const SequenceSpec& spec);

/// True for specs whose elements are infinite in number.
bool is_infinite(const SequenceSpec& spec);

/// A maximal block [lo, hi] of consecutive elements.
struct Run {
  std::uint64_t lo;
  std::uint64_t hi;
  bool operator==(const Run&) const = default;
};

inline constexpr std::size_t kDefaultMaxWindowElements = std::size_t{1} << 26;

/// { s in S : s <= bound }.
struct SequenceWindow {
  SequenceSpec spec;
  std::uint64_t bound = 0;
  std::vector<std::uint64_t> elements;
  /// Elements above 2^63 - 1 existed below `bound` and were left out.
  bool truncated = false;
};

/// Elements <= bound as ascending maximal runs. Contiguous families
/// (ap with a = 1, Zelinsky blocks) stay compact regardless of bound; other
/// families cost one run per element, capped by max_elements.
std::vector<Run> element_runs(const SequenceSpec& spec, std::uint64_t bound,
                              std::size_t max_elements = kDefaultMaxWindowElements);

SequenceWindow enumerate_window(const SequenceSpec& spec, std::uint64_t bound,
                                std::size_t max_elements = kDefaultMaxWindowElements);

/// card { s in S : s <= n }.
std::uint64_t counting_function(const SequenceSpec& spec, std::uint64_t n);

struct DensityCheck {
  bool holds = true;
  std::optional<std::uint64_t> counterexample;
  std::uint64_t count_at_counterexample = 0;
  double required_at_counterexample = 0.0;
};

/// Tests card{s <= n} >= K n^(1/alpha) for every n in [lo, hi]; reports the
/// smallest violating n.
DensityCheck check_polynomial_density(const SequenceSpec& spec, double alpha, double K, std::uint64_t lo,
                                      std::uint64_t hi);

struct DensityEstimate {
  double alpha_hat = 0.0;
  double K_hat = 0.0;
  double max_residual = 0.0;
  std::uint64_t first_index = 0;
  std::uint64_t last_index = 0;
  std::uint64_t bound = 0;
};

/// Least-squares line through (log j, log s_j) over the window at `bound`.
DensityEstimate estimate_density(const SequenceSpec& spec, std::uint64_t bound);

/// Blocks of the Zelinsky construction: B_k = [2^(2^k), 2^(2^(k+1)) - 1],
/// clamped to the 63-bit domain. k runs from 0 to 5.
std::vector<Run> zelinsky_blocks();

/// Index k of the Zelinsky block containing n (n >= 2).
unsigned zelinsky_block_index(std::uint64_t n);

}  // namespace polydense
