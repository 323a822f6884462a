#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polydense/error.hpp"
#include "polydense/report.hpp"

namespace {

struct Flags {
  std::string seq, range, weights, format, out, config;
  double alpha = 0, K = 0;
  std::uint64_t N = 0, element_bound = 0, prime_bound = 0, n_max = 0, sieve_limit = 0;
  std::size_t segment_size = 0;
  unsigned workers = 0;
  bool exact = false;
};

void add_shared_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seq", f.seq, "sequence spec: poly:c0,c1,..|ap:a,b|pow2|zelinsky[:even]|surrogate:SEED|list:...");
  cmd->add_option("--alpha", f.alpha, "polynomial density exponent (>= 1)");
  cmd->add_option("--K", f.K, "density constant (> 0)");
  cmd->add_option("--N", f.N, "main bound");
  cmd->add_option("--element-bound", f.element_bound, "largest sequence element scanned (default N)");
  cmd->add_option("--prime-bound", f.prime_bound, "largest prime considered (default N)");
  cmd->add_option("--range", f.range, "inclusive range lo:hi");
  cmd->add_option("--weights", f.weights, "summable weights: logr:R or loglogr:R");
  cmd->add_flag("--exact", f.exact, "exact P(S) for polynomial and progression specs");
  cmd->add_option("--n-max", f.n_max, "number of intervals for construct");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--config", f.config, "JSON config file; command-line flags win");
  cmd->add_option("--sieve-limit", f.sieve_limit, "cap on prime tables (env POLYDENSE_SIEVE_LIMIT)");
  cmd->add_option("--segment-size", f.segment_size, "sieve segment size in entries");
  cmd->add_option("--workers", f.workers, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime factors of polynomial-density integer sets"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> summaries{
      {"sieve", "primes up to N"},
      {"density", "check card{s <= n} >= K n^(1/alpha) over --range"},
      {"factors", "P(S) up to --prime-bound, by scan or --exact"},
      {"diagnose", "partial sums, Euler product, identity residuals, witnesses up to N"},
      {"witnesses", "n <= N with pi_S(n) / n^(1+1/alpha) >= a_n"},
      {"construct", "one prime per interval (n^alpha, (n+1)^alpha], n <= --n-max"},
      {"chebyshev", "min and max of pi_S(n) log n / n^(1/alpha) over --range"},
      {"gapcheck", "a prime in (n - n^(23/42), n] for every n <= N"},
  };
  for (const auto& name : polydense::known_commands()) {
    add_shared_flags(app.add_subcommand(name, summaries.at(name)), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return polydense::kExitPrecondition;
  }

  CLI::App* cmd = app.get_subcommands().front();
  polydense::RunConfig config;
  config.command = cmd->get_name();
  std::set<std::string> given;
  try {
    config.sieve_limit = polydense::default_sieve_limit();
    auto set = [&](const char* name) {
      if (cmd->count(std::string("--") + name) == 0) return false;
      given.insert(name);
      return true;
    };
    if (set("seq")) config.sequence = flags.seq;
    if (set("alpha")) config.alpha = flags.alpha;
    if (set("K")) config.K = flags.K;
    if (set("N")) config.N = flags.N;
    if (set("element-bound")) config.element_bound = flags.element_bound;
    if (set("prime-bound")) config.prime_bound = flags.prime_bound;
    if (set("range")) std::tie(config.range_lo, config.range_hi) = polydense::parse_range(flags.range);
    if (set("weights")) config.weights = flags.weights;
    if (set("exact")) config.exact = flags.exact;
    if (set("n-max")) config.n_max = flags.n_max;
    if (set("format")) config.format = polydense::parse_format(flags.format);
    if (set("out")) config.out_path = flags.out;
    if (set("sieve-limit")) config.sieve_limit = flags.sieve_limit;
    if (set("segment-size")) config.segment_size = flags.segment_size;
    if (set("workers")) config.workers = flags.workers;
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) {
        std::cerr << "config: cannot read '" << flags.config << "'\n";
        return polydense::kExitIo;
      }
      nlohmann::json file;
      try {
        file = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw polydense::PreconditionError(std::string("config: ") + e.what());
      }
      config = polydense::apply_config_json(config, file, given);
    }
  } catch (const polydense::PreconditionError& e) {
    std::cerr << e.what() << '\n';
    return polydense::kExitPrecondition;
  }
  return polydense::run(config, std::cout, std::cerr);
}
