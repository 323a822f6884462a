// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "polydense/constructions.hpp"
#include "polydense/diagnostics.hpp"
#include "polydense/factor_set.hpp"
#include "polydense/json_format.hpp"
#include "polydense/polynomial.hpp"
#include "polydense/sequences.hpp"
#include "polydense/sieve.hpp"

using namespace polydense;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  json report;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  std::function<Outcome(unsigned workers)> run;
};

SieveOptions sieve_options(std::uint64_t limit, unsigned workers) {
  return SieveOptions{.limit = limit, .segment_size = kDefaultSegmentSize, .workers = workers};
}

Outcome stieltjes(unsigned workers) {
  Outcome out;
  const std::uint64_t N = 100'000;
  const PrimeSieve sieve(sieve_options(N, workers));
  double worst = 0;
  for (const char* text : {"ap:1,0", "poly:1,0,1"}) {
    const PiSTable table(factor_set_exact(sieve, parse_sequence(text), N, workers));
    for (double alpha : {1.0, 2.0, 3.0}) {
      const auto t = stieltjes_identity(table, alpha, N);
      worst = std::max(worst, t.residual);
      out.pass = out.pass && t.residual <= 1e-9;
      out.report.push_back({{"seq", text}, {"alpha", alpha}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"residual", t.residual}});
    }
  }
  out.detail = "max relative residual " + format_double(worst);
  return out;
}

Outcome oracle_equivalence(unsigned workers) {
  Outcome out;
  const std::uint64_t P = 10'000;
  const PrimeSieve sieve(sieve_options(P, workers));
  std::size_t total = 0;
  for (const char* text : {"poly:1,0,1", "poly:1,2", "poly:1,1,0,1", "poly:4,6"}) {
    const auto spec = parse_sequence(text);
    const auto& c = std::get<PolynomialRange>(spec).coefficients;
    const auto exact = factor_set_exact(sieve, spec, P, workers);
    const auto element_bound = static_cast<std::uint64_t>(*evaluate_checked(c, P));
    const auto scan = factor_set_by_scan(sieve, spec, element_bound, P, workers);
    // every exact prime has some n <= p with p | Q(n) != 0
    bool certified = true;
    for (const auto& e : exact.entries) {
      bool found = false;
      for (std::uint64_t n = 1; n <= e.prime && !found; ++n) {
        found = evaluate_mod(c, n, e.prime) == 0 && *evaluate_checked(c, n) != 0;
      }
      certified = certified && found;
    }
    const bool equal = exact.primes() == scan.primes();
    out.pass = out.pass && certified && equal && count_invalid_witnesses(exact) == 0 &&
               count_invalid_witnesses(scan) == 0;
    total += exact.entries.size();
    out.report.push_back({{"seq", text},
                          {"exact_count", exact.entries.size()},
                          {"scan_count", scan.entries.size()},
                          {"equal", equal},
                          {"certified", certified},
                          {"exact", factor_set_to_json(exact)}});
  }
  out.detail = std::to_string(total) + " primes across 4 polynomials, exact == scan";
  return out;
}

Outcome powers_of_two(unsigned workers) {
  Outcome out;
  const PrimeSieve sieve(sieve_options(10'000, workers));
  const auto fs = factor_set_by_scan(sieve, parse_sequence("pow2"), 1'000'000, 10'000, workers);
  out.pass = fs.primes() == std::vector<std::uint64_t>{2};
  out.detail = "P(S) = {" + std::to_string(fs.entries.empty() ? 0 : fs.entries[0].prime) + "}, " +
               std::to_string(fs.entries.size()) + " prime(s)";
  out.report = factor_set_to_json(fs);
  return out;
}

Outcome comparability(unsigned workers) {
  Outcome out;
  const PrimeSieve sieve(sieve_options(1'000'000, workers));
  const auto primes = sieve.primes_up_to(1'000'000);
  for (double alpha : {1.0, 2.0, 3.0, 10.0}) {
    const auto r = comparability_check(alpha, primes);
    const bool equality_at_two = r.right_prime == 2 && r.right_slack == 0.0 &&
                                 comparability_check(alpha, std::vector<std::uint64_t>{2}).right_equalities == 1;
    out.pass = out.pass && r.pass && r.checked == primes.size() && equality_at_two;
    out.report.push_back({{"alpha", alpha},
                          {"pass", r.pass},
                          {"checked", r.checked},
                          {"left_slack", r.left_slack},
                          {"right_prime", r.right_prime},
                          {"right_equalities", r.right_equalities}});
  }
  out.detail = std::to_string(primes.size()) + " primes x 4 exponents, right equality at p = 2";
  return out;
}

Outcome mertens(unsigned workers) {
  Outcome out;
  const std::uint64_t N = 1'000'000;
  const PrimeSieve sieve(sieve_options(N, workers));
  const auto fs = factor_set_exact(sieve, parse_sequence("ap:1,0"), N, workers);
  const double sum = partial_sum_reciprocal(fs, 1.0, N);
  const double reference = std::log(std::log(double(N))) + 0.2615;
  out.pass = std::abs(sum - reference) <= 0.05;
  out.detail = "sum " + format_double(sum) + " vs " + format_double(reference);
  out.report = {{"sum", sum}, {"reference", reference}};
  return out;
}

Outcome witnesses(unsigned workers) {
  Outcome out;
  const std::uint64_t N = 1'000'000;
  const PrimeSieve sieve(sieve_options(N, workers));
  const PiSTable table(factor_set_exact(sieve, parse_sequence("ap:1,0"), N, workers));
  const auto weights = WeightSeries::parse("logr:2");
  const auto w = io_witnesses(table, 1.0, weights, N);
  std::size_t sampled = 0, verified = 0;
  for (std::size_t i = 0; i < w.size(); i += 10) {
    ++sampled;
    verified += is_io_witness(table, 1.0, weights, w[i]) ? 1 : 0;
  }
  out.pass = !w.empty() && w.back() >= N / 2 && sampled == verified;
  out.detail = std::to_string(w.size()) + " witnesses, largest " + (w.empty() ? "-" : std::to_string(w.back())) +
               ", " + std::to_string(verified) + "/" + std::to_string(sampled) + " samples re-verified";
  out.report = {{"count", w.size()}, {"largest", w.empty() ? 0 : w.back()}, {"sampled", sampled},
                {"verified", verified}};
  return out;
}

Outcome cube_intervals(unsigned workers) {
  Outcome out;
  const auto built = build_example2_set(3, 10'000, workers);
  out.pass = built.complete && built.final_ratio >= 0.98 && built.final_ratio <= 1.0;
  out.detail = std::string(built.complete ? "all" : "not all") + " 10000 intervals hold a prime, final ratio " +
               format_double(built.final_ratio);
  out.report = example2_to_json(built);
  return out;
}

Outcome chebyshev(unsigned workers) {
  Outcome out;
  const std::uint64_t N = 1'000'000;
  const PrimeSieve sieve(sieve_options(N, workers));
  const PiSTable table(factor_set_exact(sieve, parse_sequence("ap:1,0"), N, workers));
  const auto fit = chebyshev_fit(table, 1.0, 2, N);
  out.pass = std::abs(fit.m_hat - 0.3466) <= 1e-3 && fit.argmin == 2 && fit.M_hat <= 1.26;
  out.detail = "m_hat " + format_double(fit.m_hat) + " at " + std::to_string(fit.argmin) + ", M_hat " +
               format_double(fit.M_hat) + " at " + std::to_string(fit.argmax);
  out.report = {{"m_hat", fit.m_hat}, {"argmin", fit.argmin}, {"M_hat", fit.M_hat}, {"argmax", fit.argmax}};
  return out;
}

Outcome zelinsky(unsigned) {
  Outcome out;
  // Each family is checked from its first gap block: S from B_0 = [2, 3] with
  // K = 1, the complement from B_1 = [4, 15] with K = 2.
  struct Family {
    const char* seq;
    double K;
    std::uint64_t lo;
  };
  const std::uint64_t hi = std::uint64_t{1} << 20;
  std::string detail;
  for (const Family& f : {Family{"zelinsky", 1.0, 2}, Family{"zelinsky:even", 2.0, 4}}) {
    const auto spec = parse_sequence(f.seq);
    const bool odd_family = std::get<ZelinskyLacunary>(spec).parity == BlockParity::odd;
    for (double alpha : {1.0, 2.0, 3.0}) {
      const auto check = check_polynomial_density(spec, alpha, f.K, f.lo, hi);
      bool in_gap = false;
      unsigned block = 0;
      if (check.counterexample) {
        block = zelinsky_block_index(*check.counterexample);
        in_gap = (block % 2 == 1) != odd_family;
      }
      out.pass = out.pass && !check.holds && in_gap;
      detail += std::string(detail.empty() ? "" : "; ") + f.seq + " a=" + format_double(alpha) + " n=" +
                (check.counterexample ? std::to_string(*check.counterexample) : "-") + " B_" + std::to_string(block);
      out.report.push_back({{"seq", f.seq},
                            {"alpha", alpha},
                            {"K", f.K},
                            {"holds", check.holds},
                            {"counterexample", check.counterexample.value_or(0)},
                            {"block", block},
                            {"in_gap_block", in_gap}});
    }
  }
  out.detail = detail;
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Stieltjes identity, N = 1e5", 5, stieltjes},
      {2, "exact vs scan factor sets, primes <= 1e4", 30, oracle_equivalence},
      {3, "P({2^n}) = {2}", 0, powers_of_two},
      {4, "comparability sweep, primes <= 1e6", 10, comparability},
      {5, "Mertens cross-check, N = 1e6", 5, mertens},
      {6, "io witnesses, N = 1e6", 0, witnesses},
      {7, "one prime per cube interval, n <= 1e4", 60, cube_intervals},
      {8, "Chebyshev fit over [2, 1e6]", 0, chebyshev},
      {9, "Zelinsky density failure", 0, zelinsky},
  };

  bool all = true;
  std::vector<std::string> reports_one, reports_four;
  for (const auto& c : criteria) {
    Outcome outcome;
    double seconds = 0;
    bool threw = false;
    try {
      const auto start = std::chrono::steady_clock::now();
      outcome = c.run(1);
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      reports_one.push_back(dump_json(outcome.report));
      reports_four.push_back(dump_json(c.run(4).report));
    } catch (const std::exception& e) {
      threw = true;
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
      reports_one.push_back("");
      reports_four.push_back("!");
    }
    const bool in_time = threw || c.time_limit_s == 0 || seconds < c.time_limit_s;
    const bool pass = outcome.pass && in_time;
    all = all && pass;
    char timing[64];
    if (c.time_limit_s > 0) {
      std::snprintf(timing, sizeof timing, "%.2fs, limit %.0fs", seconds, c.time_limit_s);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    }
    std::printf("%s criterion %d: %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(), timing);
  }

  std::size_t identical = 0;
  for (std::size_t i = 0; i < reports_one.size(); ++i) identical += reports_one[i] == reports_four[i] ? 1 : 0;
  const bool deterministic = identical == reports_one.size();
  all = all && deterministic;
  std::printf("%s criterion 10: reports identical across workers {1, 4}: %zu/%zu byte-identical\n",
              deterministic ? "PASS" : "FAIL", identical, reports_one.size());
  std::fflush(stdout);
  return all ? 0 : 1;
}
