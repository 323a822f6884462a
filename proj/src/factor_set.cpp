#include "polydense/factor_set.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "polydense/error.hpp"
#include "polydense/parallel.hpp"
#include "polydense/polynomial.hpp"

namespace polydense {
namespace {

std::vector<std::int64_t> progression_coefficients(const ArithmeticProgression& ap) {
  require(ap.a <= static_cast<std::uint64_t>(INT64_MAX) && ap.b <= static_cast<std::uint64_t>(INT64_MAX),
          "progression parameters exceed the signed 64-bit range");
  return {static_cast<std::int64_t>(ap.b), static_cast<std::int64_t>(ap.a)};
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  // Extended Euclid; a and p coprime.
  __int128 t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t = t - q * new_t;
    std::swap(t, new_t);
    r = r - q * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

void require_within_sieve(const PrimeSieve& sieve, std::uint64_t prime_bound) {
  require(prime_bound >= 2, "prime bound must be >= 2");
  require(prime_bound <= sieve.limit(), "prime bound " + std::to_string(prime_bound) + " exceeds sieve limit " +
                                            std::to_string(sieve.limit()));
}

}  // namespace

std::string to_string(FactorMethod method) {
  switch (method) {
    case FactorMethod::scan: return "scan";
    case FactorMethod::exact_polynomial: return "exact-polynomial";
    case FactorMethod::exact_ap: return "exact-ap";
  }
  return "scan";
}

FactorMethod parse_factor_method(std::string_view text) {
  if (text == "scan") return FactorMethod::scan;
  if (text == "exact-polynomial") return FactorMethod::exact_polynomial;
  if (text == "exact-ap") return FactorMethod::exact_ap;
  throw PreconditionError("unknown factor-set method '" + std::string(text) + "'");
}

std::vector<std::uint64_t> FactorSet::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.prime);
  return out;
}

FactorSet factor_set_by_scan(const PrimeSieve& sieve, const SequenceSpec& spec, std::uint64_t element_bound,
                             std::uint64_t prime_bound, unsigned workers) {
  require(element_bound >= 2, "element bound must be >= 2");
  require(prime_bound >= 2, "prime bound must be >= 2");
  const auto window = enumerate_window(spec, element_bound);
  require(!window.elements.empty(), "window of " + render_sequence(spec) + " at bound " +
                                        std::to_string(element_bound) + " is empty");

  const auto& elements = window.elements;
  std::vector<std::vector<FactorEntry>> found(elements.size());
  parallel_chunks(elements.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& pp : sieve.factorize(elements[i]).factors) {
        if (pp.prime <= prime_bound) found[i].push_back({pp.prime, elements[i]});
      }
    }
  });

  // Elements are ascending, so the first hit for a prime is its smallest witness.
  std::map<std::uint64_t, std::uint64_t> witness;
  for (const auto& hits : found) {
    for (const auto& e : hits) witness.emplace(e.prime, e.witness);
  }

  FactorSet fs;
  fs.sequence = spec;
  fs.method = FactorMethod::scan;
  fs.prime_bound = prime_bound;
  fs.element_bound = element_bound;
  if (const auto* list = std::get_if<ExplicitList>(&spec)) {
    fs.complete = list->elements.empty() || list->elements.back() <= element_bound;
  }
  for (const auto& [p, w] : witness) fs.entries.push_back({p, w});
  return fs;
}

std::uint64_t count_roots_mod_p(std::span<const std::int64_t> coefficients, std::uint64_t p) {
  require(p >= 2, "modulus must be prime");
  const auto roots = roots_mod_p(coefficients, p);
  return roots ? roots->size() : p;
}

FactorSet factor_set_polynomial_exact(const PrimeSieve& sieve, std::span<const std::int64_t> coefficients,
                                      std::uint64_t prime_bound, unsigned workers) {
  PolynomialRange poly{{coefficients.begin(), coefficients.end()}};
  require(poly.coefficients.size() >= 2 && poly.coefficients.back() != 0,
          "exact factor set needs a non-constant polynomial");
  require_within_sieve(sieve, prime_bound);
  const auto primes = sieve.primes_up_to(prime_bound);
  const std::size_t degree = poly.coefficients.size() - 1;

  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  std::vector<std::uint64_t> witness(primes.size(), kNone);
  parallel_chunks(primes.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t p = primes[i];
      const auto roots = roots_mod_p(poly.coefficients, p);
      std::vector<std::uint64_t> all;
      if (!roots) {
        all.resize(std::min<std::uint64_t>(p, degree + 1));
        for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
      }
      for (const std::uint64_t r : roots ? *roots : all) {
        // Q has at most `degree` integer roots, so degree + 1 members of the
        // class include one with Q(n) != 0.
        std::uint64_t n = r == 0 ? p : r;
        bool nonzero = false;
        for (std::size_t t = 0; t <= degree && !nonzero; ++t, n += p) {
          const auto v = evaluate_checked(poly.coefficients, n);
          nonzero = !v || *v != 0;
        }
        if (nonzero) {
          witness[i] = r;
          break;
        }
      }
    }
  });

  FactorSet fs;
  fs.sequence = poly;
  fs.method = FactorMethod::exact_polynomial;
  fs.prime_bound = prime_bound;
  fs.complete = true;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (witness[i] != kNone) fs.entries.push_back({primes[i], witness[i]});
  }
  return fs;
}

FactorSet factor_set_ap_exact(const PrimeSieve& sieve, const ArithmeticProgression& ap, std::uint64_t prime_bound) {
  validate(ap);
  require_within_sieve(sieve, prime_bound);
  FactorSet fs;
  fs.sequence = ap;
  fs.method = FactorMethod::exact_ap;
  fs.prime_bound = prime_bound;
  fs.complete = true;
  for (std::uint64_t p : sieve.primes_up_to(prime_bound)) {
    const std::uint64_t a = ap.a % p;
    const std::uint64_t b = ap.b % p;
    if (a != 0) {
      fs.entries.push_back({p, static_cast<std::uint64_t>(static_cast<unsigned __int128>(p - b) % p *
                                                          inverse_mod(a, p) % p)});
    } else if (b == 0) {
      fs.entries.push_back({p, 0});
    }
  }
  return fs;
}

bool has_exact_method(const SequenceSpec& spec) {
  return std::holds_alternative<PolynomialRange>(spec) || std::holds_alternative<ArithmeticProgression>(spec);
}

FactorSet factor_set_exact(const PrimeSieve& sieve, const SequenceSpec& spec, std::uint64_t prime_bound,
                           unsigned workers) {
  if (const auto* poly = std::get_if<PolynomialRange>(&spec)) {
    return factor_set_polynomial_exact(sieve, poly->coefficients, prime_bound, workers);
  }
  if (const auto* ap = std::get_if<ArithmeticProgression>(&spec)) return factor_set_ap_exact(sieve, *ap, prime_bound);
  throw PreconditionError("no exact factor-set method for " + render_sequence(spec) + "; use the scan method");
}

bool verify_witness(const FactorSet& fs, const FactorEntry& entry) {
  if (entry.prime < 2) return false;
  if (fs.witness_kind() == WitnessKind::element) return entry.witness != 0 && entry.witness % entry.prime == 0;
  std::vector<std::int64_t> coefficients;
  if (const auto* poly = std::get_if<PolynomialRange>(&fs.sequence)) {
    coefficients = poly->coefficients;
  } else if (const auto* ap = std::get_if<ArithmeticProgression>(&fs.sequence)) {
    coefficients = progression_coefficients(*ap);
  } else {
    return false;
  }
  return entry.witness < entry.prime && evaluate_mod(coefficients, entry.witness, entry.prime) == 0;
}

std::size_t count_invalid_witnesses(const FactorSet& fs) {
  return static_cast<std::size_t>(
      std::count_if(fs.entries.begin(), fs.entries.end(), [&](const auto& e) { return !verify_witness(fs, e); }));
}

PiSTable::PiSTable(FactorSet fs) : fs_(std::move(fs)), primes_(fs_.primes()) {
  require(std::is_sorted(primes_.begin(), primes_.end()), "factor set primes must be ascending");
}

std::uint64_t PiSTable::operator()(std::uint64_t n) const {
  require(n <= fs_.prime_bound, "pi_S(" + std::to_string(n) + ") is beyond the factor set's prime bound " +
                                    std::to_string(fs_.prime_bound));
  return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), n) - primes_.begin());
}

std::uint64_t pi_s_eval(const PiSTable& table, std::uint64_t n) { return table(n); }

void write_factor_set_csv(const FactorSet& fs, std::ostream& out) {
  const std::string method = to_string(fs.method);
  out << "# sequence=" << render_sequence(fs.sequence) << " method=" << method << " prime_bound=" << fs.prime_bound
      << " element_bound=" << fs.element_bound << " complete=" << (fs.complete ? "true" : "false") << '\n';
  out << "prime,witness,method\n";
  for (const auto& e : fs.entries) out << e.prime << ',' << e.witness << ',' << method << '\n';
}

FactorSet read_factor_set_csv(std::istream& in) {
  std::string line;
  bool have_line = false;
  // `#!` lines carry report annotations such as the run config.
  while ((have_line = static_cast<bool>(std::getline(in, line))) && line.rfind("#!", 0) == 0) {
  }
  require(have_line && line.rfind("# ", 0) == 0,
          "factor-set CSV must start with a '# key=value' metadata line");
  std::map<std::string, std::string> meta;
  std::istringstream fields(line.substr(2));
  for (std::string kv; fields >> kv;) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, "malformed metadata field '" + kv + "'");
    meta[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const char* key : {"sequence", "method", "prime_bound", "element_bound", "complete"}) {
    require(meta.count(key) == 1, std::string("factor-set CSV metadata lacks '") + key + "'");
  }
  FactorSet fs;
  fs.sequence = parse_sequence(meta["sequence"]);
  fs.method = parse_factor_method(meta["method"]);
  fs.prime_bound = std::stoull(meta["prime_bound"]);
  fs.element_bound = std::stoull(meta["element_bound"]);
  fs.complete = meta["complete"] == "true";
  require(static_cast<bool>(std::getline(in, line)) && line == "prime,witness,method",
          "factor-set CSV header must be 'prime,witness,method'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    require(c1 != std::string::npos && c2 != std::string::npos, "malformed factor-set row '" + line + "'");
    require(line.substr(c2 + 1) == to_string(fs.method), "row method disagrees with metadata: '" + line + "'");
    fs.entries.push_back({std::stoull(line.substr(0, c1)), std::stoull(line.substr(c1 + 1, c2 - c1 - 1))});
  }
  return fs;
}

nlohmann::ordered_json factor_set_to_json(const FactorSet& fs) {
  nlohmann::ordered_json j;
  j["sequence"] = render_sequence(fs.sequence);
  j["method"] = to_string(fs.method);
  j["prime_bound"] = fs.prime_bound;
  j["element_bound"] = fs.element_bound;
  j["complete"] = fs.complete;
  j["lower_approximation"] = !fs.complete;
  j["witness_kind"] = fs.witness_kind() == WitnessKind::element ? "element" : "residue";
  j["count"] = fs.entries.size();
  auto primes = nlohmann::ordered_json::array();
  for (const auto& e : fs.entries) {
    nlohmann::ordered_json row;
    row["prime"] = e.prime;
    row["witness"] = e.witness;
    primes.push_back(std::move(row));
  }
  j["primes"] = std::move(primes);
  return j;
}

FactorSet factor_set_from_json(const nlohmann::ordered_json& j) {
  try {
    FactorSet fs;
    fs.sequence = parse_sequence(j.at("sequence").get<std::string>());
    fs.method = parse_factor_method(j.at("method").get<std::string>());
    fs.prime_bound = j.at("prime_bound").get<std::uint64_t>();
    fs.element_bound = j.at("element_bound").get<std::uint64_t>();
    fs.complete = j.at("complete").get<bool>();
    for (const auto& row : j.at("primes")) {
      fs.entries.push_back({row.at("prime").get<std::uint64_t>(), row.at("witness").get<std::uint64_t>()});
    }
    return fs;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed factor-set JSON: ") + e.what());
  }
}

}  // namespace polydense
