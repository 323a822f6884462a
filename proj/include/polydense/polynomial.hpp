#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace polydense {

using int128 = __int128;

/// Q(n) by Horner's rule in 128-bit arithmetic; nullopt on overflow. With
/// 64-bit coefficients every Horner partial stays within a few multiples of
/// |Q(n)| + max|c_i|, so overflow means |Q(n)| is far beyond 2^64.
std::optional<int128> evaluate_checked(std::span<const std::int64_t> coefficients, std::uint64_t n);

/// Q(r) mod p, in [0, p).
std::uint64_t evaluate_mod(std::span<const std::int64_t> coefficients, std::uint64_t r, std::uint64_t p);

/// Distinct roots of Q mod p in ascending order, for prime p. Finds the
/// split part gcd(Q, x^p - x) and factors it by equal-degree splitting, so
/// the cost grows with log p instead of p. Returns nullopt when every
/// coefficient vanishes mod p (every residue is then a root).
std::optional<std::vector<std::uint64_t>> roots_mod_p(std::span<const std::int64_t> coefficients, std::uint64_t p);

/// Smallest n0 >= 1 such that Q has no real root and Q' keeps the sign of the
/// leading coefficient on [n0, inf), so |Q(n)| is strictly increasing there.
/// Derived from Cauchy bounds for Q and Q'.
std::uint64_t monotone_tail_start(std::span<const std::int64_t> coefficients);

}  // namespace polydense
