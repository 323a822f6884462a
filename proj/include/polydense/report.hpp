#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

#include "json.hpp"
#include "polydense/sieve.hpp"

namespace polydense {

enum class OutputFormat { json, csv };

/// Exit codes of `run`.
enum ExitCode : int {
  kExitOk = 0,
  kExitPrecondition = 1,
  kExitPropertyFailure = 2,
  kExitIo = 3,
};

struct RunConfig {
  std::string command;
  std::string sequence = "ap:1,0";
  double alpha = 1.0;
  double K = 1.0;
  std::uint64_t N = 1000;
  /// 0 means "same as N" for commands that scan elements.
  std::uint64_t element_bound = 0;
  /// 0 means "same as N".
  std::uint64_t prime_bound = 0;
  std::uint64_t range_lo = 2;
  std::uint64_t range_hi = 1000;
  std::string weights = "logr:2";
  bool exact = false;
  std::uint64_t n_max = 100;
  OutputFormat format = OutputFormat::json;
  std::string out_path;  // empty: the stream passed to run()
  /// Upper cap for every prime table a command builds.
  std::uint64_t sieve_limit = kDefaultSieveLimit;
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned workers = 1;
};

inline constexpr const char* kSieveLimitEnv = "POLYDENSE_SIEVE_LIMIT";

/// Commands understood by run().
const std::set<std::string>& known_commands();

/// Parses "lo:hi".
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text);
OutputFormat parse_format(const std::string& text);

/// Resolved configuration as embedded in reports. The worker count is left
/// out: it never changes results, and reports must match across worker counts.
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// Applies keys of a JSON config file (named like the long CLI flags) to
/// `config`, skipping any key listed in `set_on_command_line`.
RunConfig apply_config_json(RunConfig config, const nlohmann::json& file,
                            const std::set<std::string>& set_on_command_line);

/// Default sieve limit, honouring POLYDENSE_SIEVE_LIMIT when set.
std::uint64_t default_sieve_limit();

struct RunOutcome {
  int exit_code = kExitOk;
  std::string report;      // empty when the command was rejected
  std::string diagnostic;  // one line, empty on success
};

/// Runs one command and renders its report without touching the filesystem.
RunOutcome execute(const RunConfig& config);

/// execute(), then writes the report to config.out_path (or `out`) and the
/// diagnostic to `err`. Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace polydense
