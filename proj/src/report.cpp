#include "polydense/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "polydense/constructions.hpp"
#include "polydense/diagnostics.hpp"
#include "polydense/error.hpp"
#include "polydense/factor_set.hpp"
#include "polydense/json_format.hpp"
#include "polydense/sequences.hpp"

namespace polydense {
namespace {

using json = nlohmann::ordered_json;

constexpr double kStieltjesTolerance = 1e-9;

struct CommandResult {
  json result;
  std::string csv;
  std::string property_failure;  // empty when every checked property holds
};

PrimeSieve make_sieve(const RunConfig& config, std::uint64_t needed) {
  require(needed <= config.sieve_limit, "bound " + std::to_string(needed) + " exceeds --sieve-limit " +
                                            std::to_string(config.sieve_limit));
  return PrimeSieve(SieveOptions{.limit = std::max<std::uint64_t>(needed, 2),
                                 .segment_size = config.segment_size,
                                 .smallest_factor_table = false,
                                 .memory_budget_bytes = kDefaultMemoryBudget,
                                 .workers = config.workers});
}

std::uint64_t or_default(std::uint64_t value, std::uint64_t fallback) { return value == 0 ? fallback : value; }

json factor_set_summary(const FactorSet& fs) {
  json j;
  j["sequence"] = render_sequence(fs.sequence);
  j["method"] = to_string(fs.method);
  j["prime_bound"] = fs.prime_bound;
  j["element_bound"] = fs.element_bound;
  j["complete"] = fs.complete;
  j["lower_approximation"] = !fs.complete;
  j["count"] = fs.entries.size();
  return j;
}

/// Exact P(S) where an exact method exists, otherwise a scan of the window.
FactorSet resolve_factor_set(const RunConfig& config, const PrimeSieve& sieve, const SequenceSpec& spec,
                             std::uint64_t prime_bound) {
  if (has_exact_method(spec)) return factor_set_exact(sieve, spec, prime_bound, config.workers);
  return factor_set_by_scan(sieve, spec, or_default(config.element_bound, config.N), prime_bound, config.workers);
}

CommandResult cmd_sieve(const RunConfig& config) {
  require(config.N >= 2, "N must be >= 2");
  const auto sieve = make_sieve(config, config.N);
  const auto primes = sieve.primes_up_to(config.N);
  CommandResult out;
  out.result["N"] = config.N;
  out.result["prime_count"] = primes.size();
  out.result["largest_prime"] = primes.back();
  if (primes.size() <= 10000) out.result["primes"] = primes;
  std::ostringstream csv;
  csv << "prime\n";
  for (auto p : primes) csv << p << '\n';
  out.csv = csv.str();
  return out;
}

CommandResult cmd_density(const RunConfig& config) {
  const auto spec = parse_sequence(config.sequence);
  const auto check = check_polynomial_density(spec, config.alpha, config.K, config.range_lo, config.range_hi);
  CommandResult out;
  out.result["holds"] = check.holds;
  if (check.counterexample) {
    out.result["counterexample"] = *check.counterexample;
    out.result["count_at_counterexample"] = check.count_at_counterexample;
    out.result["required_at_counterexample"] = check.required_at_counterexample;
    if (const auto* z = std::get_if<ZelinskyLacunary>(&spec); z && *check.counterexample >= 2) {
      const unsigned block = zelinsky_block_index(*check.counterexample);
      const bool populated = (block % 2 == 1) == (z->parity == BlockParity::odd);
      out.result["zelinsky_block"] = block;
      out.result["in_gap_block"] = !populated;
    }
  } else {
    out.result["counterexample"] = nullptr;
  }
  out.result["count_at_range_end"] = counting_function(spec, config.range_hi);
  try {
    const auto estimate = estimate_density(spec, config.range_hi);
    json e;
    e["label"] = "empirical";
    e["alpha_hat"] = estimate.alpha_hat;
    e["K_hat"] = estimate.K_hat;
    e["max_residual"] = estimate.max_residual;
    e["indices"] = std::to_string(estimate.first_index) + ":" + std::to_string(estimate.last_index);
    out.result["estimate"] = e;
  } catch (const PreconditionError& e) {
    out.result["estimate"] = nullptr;
    out.result["estimate_skipped"] = e.what();
  }
  std::ostringstream csv;
  csv << "holds,counterexample,count,required\n";
  csv << (check.holds ? 1 : 0) << ',' << check.counterexample.value_or(0) << ',' << check.count_at_counterexample
      << ',' << format_double(check.required_at_counterexample) << '\n';
  out.csv = csv.str();
  return out;
}

CommandResult cmd_factors(const RunConfig& config) {
  const auto spec = parse_sequence(config.sequence);
  const std::uint64_t prime_bound = or_default(config.prime_bound, config.N);
  const auto sieve = make_sieve(config, prime_bound);
  const FactorSet fs =
      config.exact ? factor_set_exact(sieve, spec, prime_bound, config.workers)
                   : factor_set_by_scan(sieve, spec, or_default(config.element_bound, config.N), prime_bound,
                                        config.workers);
  CommandResult out;
  out.result = factor_set_to_json(fs);
  std::ostringstream csv;
  write_factor_set_csv(fs, csv);
  out.csv = csv.str();
  if (const auto bad = count_invalid_witnesses(fs); bad > 0) {
    out.property_failure = std::to_string(bad) + " factor-set witnesses failed re-verification";
  }
  return out;
}

CommandResult cmd_diagnose(const RunConfig& config) {
  const auto spec = parse_sequence(config.sequence);
  const auto sieve = make_sieve(config, config.N);
  const FactorSet fs = resolve_factor_set(config, sieve, spec, config.N);
  const PiSTable table(fs);
  const auto report = diagnose(table, config.alpha, config.N, WeightSeries::parse(config.weights));
  CommandResult out;
  out.result["factor_set"] = factor_set_summary(fs);
  out.result["diagnostics"] = diagnostics_to_json(report);
  std::ostringstream csv;
  write_diagnostics_csv(report, csv);
  out.csv = csv.str();
  if (report.stieltjes.residual > kStieltjesTolerance) {
    out.property_failure = "Stieltjes identity residual " + format_double(report.stieltjes.residual) +
                           " exceeds " + format_double(kStieltjesTolerance);
  } else if (!report.comparability.pass) {
    out.property_failure = "comparability inequality fails at p = " + std::to_string(report.comparability.first_failure);
  } else if (count_invalid_witnesses(fs) > 0) {
    out.property_failure = "factor-set witnesses failed re-verification";
  }
  return out;
}

CommandResult cmd_witnesses(const RunConfig& config) {
  const auto spec = parse_sequence(config.sequence);
  const auto sieve = make_sieve(config, config.N);
  const FactorSet fs = resolve_factor_set(config, sieve, spec, config.N);
  const PiSTable table(fs);
  const auto weights = WeightSeries::parse(config.weights);
  const auto witnesses = io_witnesses(table, config.alpha, weights, config.N);
  CommandResult out;
  out.result["factor_set"] = factor_set_summary(fs);
  out.result["weights"] = weights.label();
  out.result["start_index"] = weights.start_index();
  out.result["count"] = witnesses.size();
  out.result["largest"] = witnesses.empty() ? json(nullptr) : json(witnesses.back());
  out.result["witnesses"] = witnesses;
  std::ostringstream csv;
  csv << "n\n";
  for (auto n : witnesses) csv << n << '\n';
  out.csv = csv.str();
  for (auto n : witnesses) {
    if (!is_io_witness(table, config.alpha, weights, n)) {
      out.property_failure = "witness " + std::to_string(n) + " fails direct re-verification";
      break;
    }
  }
  return out;
}

CommandResult cmd_chebyshev(const RunConfig& config) {
  const auto spec = parse_sequence(config.sequence);
  const auto sieve = make_sieve(config, config.range_hi);
  const FactorSet fs = resolve_factor_set(config, sieve, spec, config.range_hi);
  const auto fit = chebyshev_fit(PiSTable(fs), config.alpha, config.range_lo, config.range_hi);
  CommandResult out;
  out.result["factor_set"] = factor_set_summary(fs);
  out.result["label"] = "empirical";
  out.result["m_hat"] = fit.m_hat;
  out.result["argmin"] = fit.argmin;
  out.result["M_hat"] = fit.M_hat;
  out.result["argmax"] = fit.argmax;
  std::ostringstream csv;
  csv << "m_hat,argmin,M_hat,argmax\n"
      << format_double(fit.m_hat) << ',' << fit.argmin << ',' << format_double(fit.M_hat) << ',' << fit.argmax << '\n';
  out.csv = csv.str();
  return out;
}

CommandResult cmd_construct(const RunConfig& config) {
  require(config.alpha >= 3 && config.alpha == std::floor(config.alpha) && config.alpha <= 64,
          "construct needs an integer alpha >= 3");
  const auto built = build_example2_set(static_cast<unsigned>(config.alpha), config.n_max, config.workers);
  CommandResult out;
  out.result = example2_to_json(built);
  std::ostringstream csv;
  write_example2_csv(built, csv);
  out.csv = csv.str();
  if (!built.complete) out.property_failure = "interval n = " + std::to_string(built.empty_interval) + " holds no prime";
  return out;
}

CommandResult cmd_gapcheck(const RunConfig& config) {
  const auto sieve = make_sieve(config, config.N);
  const auto gap = gap_check_iwaniec_pintz(sieve, config.N);
  CommandResult out;
  out.result = gap_check_to_json(gap);
  std::ostringstream csv;
  csv << "N,pass,failures,worst_n,worst_count\n"
      << gap.N << ',' << (gap.pass ? 1 : 0) << ',' << gap.failures << ',' << gap.worst_n << ',' << gap.worst_count
      << '\n';
  out.csv = csv.str();
  if (!gap.pass) out.property_failure = "no prime in (n - n^(23/42), n] at n = " + std::to_string(gap.first_failure);
  return out;
}

CommandResult dispatch(const RunConfig& config) {
  const auto& c = config.command;
  if (c == "sieve") return cmd_sieve(config);
  if (c == "density") return cmd_density(config);
  if (c == "factors") return cmd_factors(config);
  if (c == "diagnose") return cmd_diagnose(config);
  if (c == "witnesses") return cmd_witnesses(config);
  if (c == "chebyshev") return cmd_chebyshev(config);
  if (c == "construct") return cmd_construct(config);
  if (c == "gapcheck") return cmd_gapcheck(config);
  throw PreconditionError("command: unknown command '" + c + "'");
}

void validate_config(const RunConfig& config) {
  require(known_commands().count(config.command) == 1, "command: unknown command '" + config.command + "'");
  require(config.alpha >= 1.0 && std::isfinite(config.alpha), "alpha: must be >= 1");
  require(config.K > 0.0 && std::isfinite(config.K), "K: must be > 0");
  require(config.N >= 1, "N: must be positive");
  require(config.range_lo >= 1 && config.range_lo <= config.range_hi, "range: need 1 <= lo <= hi");
  require(config.workers >= 1, "workers: must be >= 1");
  require(config.sieve_limit >= 2, "sieve-limit: must be >= 2");
}

}  // namespace

const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands{"sieve",     "density",   "factors",   "diagnose",
                                              "witnesses", "construct", "chebyshev", "gapcheck"};
  return commands;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "range: expected lo:hi, got '" + text + "'");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    const auto a = std::stoull(lo, &used_lo);
    const auto b = std::stoull(hi, &used_hi);
    require(used_lo == lo.size() && used_hi == hi.size(), "range: trailing characters in '" + text + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw PreconditionError("range: expected lo:hi, got '" + text + "'");
  }
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw PreconditionError("format: expected csv or json, got '" + text + "'");
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["seq"] = c.sequence;
  j["alpha"] = c.alpha;
  j["K"] = c.K;
  j["N"] = c.N;
  j["element-bound"] = c.element_bound;
  j["prime-bound"] = c.prime_bound;
  j["range"] = std::to_string(c.range_lo) + ":" + std::to_string(c.range_hi);
  j["weights"] = c.weights;
  j["exact"] = c.exact;
  j["n-max"] = c.n_max;
  j["format"] = c.format == OutputFormat::json ? "json" : "csv";
  j["sieve-limit"] = c.sieve_limit;
  j["segment-size"] = c.segment_size;
  j["log"] = "natural";
  return j;
}

RunConfig apply_config_json(RunConfig config, const nlohmann::json& file,
                            const std::set<std::string>& set_on_command_line) {
  require(file.is_object(), "config: file must hold a JSON object");
  try {
    for (const auto& [key, value] : file.items()) {
      if (set_on_command_line.count(key)) continue;
      if (key == "seq") config.sequence = value.get<std::string>();
      else if (key == "alpha") config.alpha = value.get<double>();
      else if (key == "K") config.K = value.get<double>();
      else if (key == "N") config.N = value.get<std::uint64_t>();
      else if (key == "element-bound") config.element_bound = value.get<std::uint64_t>();
      else if (key == "prime-bound") config.prime_bound = value.get<std::uint64_t>();
      else if (key == "range") std::tie(config.range_lo, config.range_hi) = parse_range(value.get<std::string>());
      else if (key == "weights") config.weights = value.get<std::string>();
      else if (key == "exact") config.exact = value.get<bool>();
      else if (key == "n-max") config.n_max = value.get<std::uint64_t>();
      else if (key == "format") config.format = parse_format(value.get<std::string>());
      else if (key == "out") config.out_path = value.get<std::string>();
      else if (key == "sieve-limit") config.sieve_limit = value.get<std::uint64_t>();
      else if (key == "segment-size") config.segment_size = value.get<std::size_t>();
      else if (key == "workers") config.workers = value.get<unsigned>();
      else throw PreconditionError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  return config;
}

std::uint64_t default_sieve_limit() {
  if (const char* env = std::getenv(kSieveLimitEnv); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::logic_error&) {
    }
    throw PreconditionError(std::string(kSieveLimitEnv) + ": not a positive integer: '" + env + "'");
  }
  return kDefaultSieveLimit;
}

RunOutcome execute(const RunConfig& config) {
  RunOutcome outcome;
  CommandResult result;
  try {
    validate_config(config);
    result = dispatch(config);
  } catch (const PreconditionError& e) {
    outcome.exit_code = kExitPrecondition;
    outcome.diagnostic = e.what();
    return outcome;
  } catch (const IoError& e) {
    outcome.exit_code = kExitIo;
    outcome.diagnostic = e.what();
    return outcome;
  }
  const auto config_json = config_to_json(config);
  if (config.format == OutputFormat::json) {
    json report;
    report["command"] = config.command;
    report["config"] = config_json;
    report["properties_hold"] = result.property_failure.empty();
    report["result"] = std::move(result.result);
    outcome.report = dump_json(report);
  } else {
    outcome.report = "#! config " + dump_json(config_json, 0) + result.csv;
  }
  if (!result.property_failure.empty()) {
    outcome.exit_code = kExitPropertyFailure;
    outcome.diagnostic = result.property_failure;
  }
  return outcome;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto outcome = execute(config);
  if (!outcome.report.empty()) {
    if (config.out_path.empty()) {
      out << outcome.report;
    } else {
      std::ofstream file(config.out_path, std::ios::binary);
      file << outcome.report;
      if (!file) {
        err << "out: cannot write '" << config.out_path << "'\n";
        return kExitIo;
      }
    }
  }
  if (!outcome.diagnostic.empty()) err << outcome.diagnostic << '\n';
  return outcome.exit_code;
}

}  // namespace polydense
