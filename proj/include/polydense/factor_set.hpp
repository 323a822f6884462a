#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polydense/sequences.hpp"
#include "polydense/sieve.hpp"

namespace polydense {

enum class FactorMethod { scan, exact_polynomial, exact_ap };

std::string to_string(FactorMethod method);
FactorMethod parse_factor_method(std::string_view text);

/// Scan witnesses are elements s with p | s; exact witnesses are residues r
/// with Q(r) = 0 (mod p), where Q is the polynomial (or a n + b).
enum class WitnessKind { element, residue };

struct FactorEntry {
  std::uint64_t prime;
  std::uint64_t witness;
  bool operator==(const FactorEntry&) const = default;
};

/// P(S) intersected with [2, prime_bound], or a lower approximation of it when
/// `complete` is false.
struct FactorSet {
  SequenceSpec sequence;
  FactorMethod method = FactorMethod::scan;
  std::uint64_t prime_bound = 0;
  /// Window bound of the scanned elements (scan method only, else 0).
  std::uint64_t element_bound = 0;
  bool complete = false;
  std::vector<FactorEntry> entries;  // ascending by prime

  WitnessKind witness_kind() const {
    return method == FactorMethod::scan ? WitnessKind::element : WitnessKind::residue;
  }
  std::vector<std::uint64_t> primes() const;
  bool operator==(const FactorSet&) const = default;
};

/// Primes <= prime_bound dividing some element of the window at element_bound,
/// each with its smallest such element.
FactorSet factor_set_by_scan(const PrimeSieve& sieve, const SequenceSpec& spec, std::uint64_t element_bound,
                             std::uint64_t prime_bound, unsigned workers = 1);

/// Number of r in [0, p) with Q(r) = 0 (mod p); p when every coefficient
/// vanishes mod p.
std::uint64_t count_roots_mod_p(std::span<const std::int64_t> coefficients, std::uint64_t p);

/// Exact P(S) for S = {|Q(n)|}: p belongs iff Q has a root mod p whose residue
/// class contains some n >= 1 with Q(n) != 0.
FactorSet factor_set_polynomial_exact(const PrimeSieve& sieve, std::span<const std::int64_t> coefficients,
                                      std::uint64_t prime_bound, unsigned workers = 1);

/// Exact P(S) for S = {a n + b}: p belongs iff a n = -b (mod p) is solvable.
FactorSet factor_set_ap_exact(const PrimeSieve& sieve, const ArithmeticProgression& ap, std::uint64_t prime_bound);

/// Dispatches to the exact method for polynomial and progression specs.
FactorSet factor_set_exact(const PrimeSieve& sieve, const SequenceSpec& spec, std::uint64_t prime_bound,
                           unsigned workers = 1);

bool has_exact_method(const SequenceSpec& spec);

/// Re-checks one witness by direct division or modular evaluation.
bool verify_witness(const FactorSet& fs, const FactorEntry& entry);
/// Number of entries whose witness fails to verify.
std::size_t count_invalid_witnesses(const FactorSet& fs);

/// Step function pi_S(n) = card{p in the factor set : p <= n}, n <= prime_bound.
class PiSTable {
 public:
  explicit PiSTable(FactorSet fs);

  std::uint64_t operator()(std::uint64_t n) const;
  std::uint64_t prime_bound() const { return fs_.prime_bound; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  const FactorSet& factor_set() const { return fs_; }

 private:
  FactorSet fs_;
  std::vector<std::uint64_t> primes_;
};

std::uint64_t pi_s_eval(const PiSTable& table, std::uint64_t n);

/// CSV: one `# key=value ...` metadata line, header `prime,witness,method`,
/// then one row per prime.
void write_factor_set_csv(const FactorSet& fs, std::ostream& out);
FactorSet read_factor_set_csv(std::istream& in);

nlohmann::ordered_json factor_set_to_json(const FactorSet& fs);
FactorSet factor_set_from_json(const nlohmann::ordered_json& j);

}  // namespace polydense
