#include "polydense/diagnostics.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "polydense/error.hpp"
#include "polydense/json_format.hpp"

namespace polydense {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_alpha(double alpha) { require(alpha >= 1.0, "alpha must be >= 1"); }

void require_within(std::uint64_t N, std::uint64_t bound) {
  require(N <= bound, "N = " + std::to_string(N) + " exceeds the factor set's prime bound " + std::to_string(bound));
}

double reciprocal_power(std::uint64_t p, double inv_alpha) { return std::pow(static_cast<double>(p), -inv_alpha); }

}  // namespace

WeightSeries::WeightSeries(InverseNLogR w) : kind_(w) { require(w.r > 1.0, "weight exponent r must be > 1"); }
WeightSeries::WeightSeries(InverseNLogLogLogR w) : kind_(w) { require(w.r > 1.0, "weight exponent r must be > 1"); }
WeightSeries::WeightSeries(CustomWeights w) : kind_(std::move(w)) {
  require(static_cast<bool>(std::get<CustomWeights>(kind_).evaluate), "custom weights need an evaluator");
}

WeightSeries WeightSeries::parse(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, "weights must look like logr:R or loglogr:R, got '" + std::string(text) + "'");
  const std::string head(text.substr(0, colon));
  double r = 0;
  try {
    std::size_t used = 0;
    const std::string body(text.substr(colon + 1));
    r = std::stod(body, &used);
    require(used == body.size(), "trailing characters in weight exponent");
  } catch (const std::logic_error&) {
    throw PreconditionError("malformed weight exponent in '" + std::string(text) + "'");
  }
  if (head == "logr") return WeightSeries(InverseNLogR{r});
  if (head == "loglogr") return WeightSeries(InverseNLogLogLogR{r});
  throw PreconditionError("unknown weight family '" + head + "' (expected logr or loglogr)");
}

double WeightSeries::operator()(std::uint64_t n) const {
  require(n >= start_index(), "weight a_n undefined below its start index");
  const double x = static_cast<double>(n);
  return std::visit(overloaded{
                        [&](const InverseNLogR& w) { return 1.0 / (x * std::pow(std::log(x), w.r)); },
                        [&](const InverseNLogLogLogR& w) {
                          const double l = std::log(x);
                          return 1.0 / (x * l * std::pow(std::log(l), w.r));
                        },
                        [&](const CustomWeights& w) { return w.evaluate(n); },
                    },
                    kind_);
}

std::uint64_t WeightSeries::start_index() const {
  return std::visit(overloaded{
                        [](const InverseNLogR&) -> std::uint64_t { return 2; },
                        [](const InverseNLogLogLogR&) -> std::uint64_t { return 3; },
                        [](const CustomWeights& w) { return w.start; },
                    },
                    kind_);
}

std::string WeightSeries::label() const {
  return std::visit(overloaded{
                        [](const InverseNLogR& w) { return "logr:" + format_double(w.r); },
                        [](const InverseNLogLogLogR& w) { return "loglogr:" + format_double(w.r); },
                        [](const CustomWeights& w) { return w.label; },
                    },
                    kind_);
}

double partial_sum_reciprocal(const FactorSet& fs, double alpha, std::uint64_t N) {
  require_alpha(alpha);
  require_within(N, fs.prime_bound);
  CompensatedSum sum;
  for (const auto& e : fs.entries) {
    if (e.prime > N) break;
    sum.add(reciprocal_power(e.prime, 1.0 / alpha));
  }
  return sum.value();
}

double log_euler_partial_product(const FactorSet& fs, double alpha, std::uint64_t N) {
  require_alpha(alpha);
  require_within(N, fs.prime_bound);
  CompensatedSum sum;
  for (const auto& e : fs.entries) {
    if (e.prime > N) break;
    sum.add(-std::log1p(-reciprocal_power(e.prime, 1.0 / alpha)));
  }
  return sum.value();
}

double euler_partial_product(const FactorSet& fs, double alpha, std::uint64_t N) {
  return std::exp(log_euler_partial_product(fs, alpha, N));
}

double weighted_pi_sum(const PiSTable& table, double alpha, std::uint64_t N) {
  require_alpha(alpha);
  require_within(N, table.prime_bound());
  const auto primes = table.primes();
  const double exponent = -(1.0 + 1.0 / alpha);
  CompensatedSum sum;
  std::size_t pi = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    while (pi < primes.size() && primes[pi] <= n) ++pi;
    if (pi > 0) sum.add(static_cast<double>(pi) * std::pow(static_cast<double>(n), exponent));
  }
  return sum.value();
}

ComparabilityResult comparability_check(double alpha, std::span<const std::uint64_t> primes) {
  require_alpha(alpha);
  require(!primes.empty(), "comparability check needs at least one prime");
  const double inv_alpha = 1.0 / alpha;
  const double at_two = std::pow(2.0, -inv_alpha);
  ComparabilityResult result;
  result.left_slack = std::numeric_limits<double>::infinity();
  result.right_slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t p : primes) {
    const double x = std::pow(static_cast<double>(p), -inv_alpha);
    // 1/(1 - x) - 1 rewritten as x/(1 - x) to avoid cancellation for small x.
    const double middle = x / (1.0 - x);
    const double upper = x / (1.0 - at_two);
    const bool left_ok = x < middle;
    const bool right_ok = middle <= upper;
    ++result.checked;
    if (!(left_ok && right_ok) && result.pass) {
      result.pass = false;
      result.first_failure = p;
    }
    const double left_slack = (middle - x) / middle;
    const double right_slack = (upper - middle) / upper;
    if (left_slack < result.left_slack) {
      result.left_slack = left_slack;
      result.left_prime = p;
    }
    if (right_slack < result.right_slack) {
      result.right_slack = right_slack;
      result.right_prime = p;
    }
    if (middle == upper) ++result.right_equalities;
  }
  return result;
}

StieltjesTerms stieltjes_identity(const PiSTable& table, double alpha, std::uint64_t N, double coefficient) {
  require_alpha(alpha);
  require(N >= 2, "Stieltjes identity needs N >= 2");
  require_within(N, table.prime_bound());
  const double inv_alpha = 1.0 / alpha;
  const auto primes = table.primes();
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), N) - primes.begin());

  CompensatedSum lhs;
  for (std::size_t i = 0; i < k; ++i) lhs.add(reciprocal_power(primes[i], inv_alpha));

  // On [q_i, q_{i+1}) pi_S = i + 1 and int t^-(1+1/a) dt = a (q_i^(-1/a) - q_{i+1}^(-1/a)).
  CompensatedSum telescoped;
  for (std::size_t i = 0; i < k; ++i) {
    const double a = reciprocal_power(primes[i], inv_alpha);
    const double b = reciprocal_power(i + 1 < k ? primes[i + 1] : N, inv_alpha);
    telescoped.add(static_cast<double>(i + 1) * (a - b));
  }

  StieltjesTerms terms;
  terms.lhs = lhs.value();
  terms.boundary = reciprocal_power(N, inv_alpha) * static_cast<double>(k);
  terms.integral = alpha * telescoped.value();
  terms.coefficient = coefficient > 0.0 ? coefficient : inv_alpha;
  const double weighted = coefficient > 0.0 ? coefficient * terms.integral : telescoped.value();
  terms.rhs = terms.boundary + weighted;
  terms.residual = std::abs(terms.lhs - terms.rhs) / std::max(1.0, std::abs(terms.lhs));
  return terms;
}

double stieltjes_identity_residual(const PiSTable& table, double alpha, std::uint64_t N) {
  return stieltjes_identity(table, alpha, N).residual;
}

std::vector<std::uint64_t> io_witnesses(const PiSTable& table, double alpha, const WeightSeries& weights,
                                        std::uint64_t N) {
  require_alpha(alpha);
  require_within(N, table.prime_bound());
  const auto primes = table.primes();
  const double exponent = 1.0 + 1.0 / alpha;
  std::vector<std::uint64_t> witnesses;
  std::size_t pi = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    while (pi < primes.size() && primes[pi] <= n) ++pi;
    if (n < weights.start_index() || pi == 0) continue;
    const double nd = static_cast<double>(n);
    if (static_cast<double>(pi) >= weights(n) * std::pow(nd, exponent)) witnesses.push_back(n);
  }
  return witnesses;
}

bool is_io_witness(const PiSTable& table, double alpha, const WeightSeries& weights, std::uint64_t n) {
  require_alpha(alpha);
  if (n < weights.start_index()) return false;
  const double density = static_cast<double>(table(n)) / std::pow(static_cast<double>(n), 1.0 + 1.0 / alpha);
  return density >= weights(n);
}

HarmonicCheck harmonic_lower_bound_check(const SequenceSpec& spec, double alpha, double K, std::uint64_t N) {
  require_alpha(alpha);
  require(K > 0.0, "K must be > 0");
  const auto window = enumerate_window(spec, N);
  require(!window.elements.empty(), "harmonic bound needs a nonempty window");
  HarmonicCheck check;
  check.count = window.elements.size();
  for (std::size_t j = 0; j < window.elements.size(); ++j) {
    const long double cap = static_cast<long double>(K) * std::pow(static_cast<long double>(j + 1), alpha);
    if (static_cast<long double>(window.elements[j]) > cap) {
      check.precondition_holds = false;
      check.precondition_violation_index = j + 1;
      return check;
    }
  }
  const double inv_alpha = 1.0 / alpha;
  CompensatedSum lhs, harmonic;
  for (std::size_t j = 0; j < window.elements.size(); ++j) {
    lhs.add(reciprocal_power(window.elements[j], inv_alpha));
    harmonic.add(1.0 / static_cast<double>(j + 1));
  }
  check.lhs = lhs.value();
  check.rhs = std::pow(K, -inv_alpha) * harmonic.value();
  // Equality cases (s_j = K j^alpha) may differ by rounding in the last bits.
  check.holds = check.lhs >= check.rhs * (1.0 - 1e-12);
  return check;
}

ChebyshevFit chebyshev_fit(const PiSTable& table, double alpha, std::uint64_t lo, std::uint64_t hi) {
  require_alpha(alpha);
  require(lo >= 2 && lo <= hi, "Chebyshev range must satisfy 2 <= lo <= hi");
  require_within(hi, table.prime_bound());
  const double inv_alpha = 1.0 / alpha;
  const auto primes = table.primes();
  std::size_t pi = static_cast<std::size_t>(table(lo - 1));
  ChebyshevFit fit{.m_hat = 0, .M_hat = 0, .argmin = 0, .argmax = 0, .lo = lo, .hi = hi};
  for (std::uint64_t n = lo; n <= hi; ++n) {
    while (pi < primes.size() && primes[pi] <= n) ++pi;
    const double nd = static_cast<double>(n);
    const double ratio = static_cast<double>(pi) * std::log(nd) / std::pow(nd, inv_alpha);
    if (fit.argmin == 0 || ratio < fit.m_hat) {
      fit.m_hat = ratio;
      fit.argmin = n;
    }
    if (fit.argmax == 0 || ratio > fit.M_hat) {
      fit.M_hat = ratio;
      fit.argmax = n;
    }
  }
  return fit;
}

std::vector<std::uint64_t> report_checkpoints(std::uint64_t N) {
  std::vector<std::uint64_t> points;
  for (std::uint64_t scale = 1; scale <= N; scale *= 10) {
    for (std::uint64_t m : {1, 2, 5}) {
      if (m * scale <= N) points.push_back(m * scale);
    }
    if (scale > N / 10) break;
  }
  if (points.empty() || points.back() != N) points.push_back(N);
  return points;
}

DiagnosticsReport diagnose(const PiSTable& table, double alpha, std::uint64_t N, const WeightSeries& weights) {
  require_alpha(alpha);
  require(N >= 2, "diagnostics need N >= 2");
  require_within(N, table.prime_bound());
  const double inv_alpha = 1.0 / alpha;
  const auto primes = table.primes();

  DiagnosticsReport report;
  report.alpha = alpha;
  report.prime_bound = table.prime_bound();
  report.N = N;
  report.complete = table.factor_set().complete;
  report.weights = weights.label();

  const auto checkpoints = report_checkpoints(N);
  std::size_t next = 0;
  CompensatedSum partial, log_product, weighted;
  std::size_t pi = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    while (pi < primes.size() && primes[pi] <= n) {
      const double x = reciprocal_power(primes[pi], inv_alpha);
      partial.add(x);
      log_product.add(-std::log1p(-x));
      ++pi;
    }
    if (pi > 0) weighted.add(static_cast<double>(pi) * std::pow(static_cast<double>(n), -(1.0 + inv_alpha)));
    if (next < checkpoints.size() && checkpoints[next] == n) {
      report.series.push_back({n, pi, partial.value(), log_product.value(), weighted.value()});
      ++next;
    }
  }
  report.partial_sum = partial.value();
  report.log_product = log_product.value();
  report.weighted_pi_sum = weighted.value();
  report.stieltjes = stieltjes_identity(table, alpha, N);
  const std::vector<std::uint64_t> listed(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(table(N)));
  if (!listed.empty()) report.comparability = comparability_check(alpha, listed);
  const auto witnesses = io_witnesses(table, alpha, weights, N);
  report.witness_count = witnesses.size();
  const std::size_t tail = std::min<std::size_t>(10, witnesses.size());
  report.last_witnesses.assign(witnesses.end() - static_cast<std::ptrdiff_t>(tail), witnesses.end());
  report.fit = chebyshev_fit(table, alpha, 2, N);
  return report;
}

nlohmann::ordered_json diagnostics_to_json(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["prime_bound"] = r.prime_bound;
  j["N"] = r.N;
  j["log"] = "natural";
  j["factor_set_complete"] = r.complete;
  j["partial_sum_reciprocal"] = r.partial_sum;
  j["log_euler_partial_product"] = r.log_product;
  j["weighted_pi_sum"] = r.weighted_pi_sum;
  nlohmann::ordered_json st;
  st["lhs"] = r.stieltjes.lhs;
  st["boundary"] = r.stieltjes.boundary;
  st["integral"] = r.stieltjes.integral;
  st["coefficient"] = r.stieltjes.coefficient;
  st["rhs"] = r.stieltjes.rhs;
  st["residual"] = r.stieltjes.residual;
  j["stieltjes"] = st;
  nlohmann::ordered_json cmp;
  cmp["pass"] = r.comparability.pass;
  cmp["checked"] = r.comparability.checked;
  cmp["left_slack"] = r.comparability.left_slack;
  cmp["left_prime"] = r.comparability.left_prime;
  cmp["right_slack"] = r.comparability.right_slack;
  cmp["right_prime"] = r.comparability.right_prime;
  cmp["right_equalities"] = r.comparability.right_equalities;
  j["comparability"] = cmp;
  nlohmann::ordered_json wit;
  wit["weights"] = r.weights;
  wit["count"] = r.witness_count;
  wit["last"] = r.last_witnesses;
  j["witnesses"] = wit;
  nlohmann::ordered_json fit;
  fit["label"] = "empirical";
  fit["lo"] = r.fit.lo;
  fit["hi"] = r.fit.hi;
  fit["m_hat"] = r.fit.m_hat;
  fit["argmin"] = r.fit.argmin;
  fit["M_hat"] = r.fit.M_hat;
  fit["argmax"] = r.fit.argmax;
  j["chebyshev_fit"] = fit;
  auto series = nlohmann::ordered_json::array();
  for (const auto& p : r.series) {
    nlohmann::ordered_json row;
    row["n"] = p.n;
    row["pi_s"] = p.pi_s;
    row["partial_sum_reciprocal"] = p.partial_sum;
    row["log_euler_partial_product"] = p.log_product;
    row["weighted_pi_sum"] = p.weighted_pi_sum;
    series.push_back(std::move(row));
  }
  j["series"] = std::move(series);
  return j;
}

void write_diagnostics_csv(const DiagnosticsReport& r, std::ostream& out) {
  out << "metric,n,value\n";
  for (const auto& p : r.series) out << "pi_s," << p.n << ',' << p.pi_s << '\n';
  for (const auto& p : r.series) out << "partial_sum_reciprocal," << p.n << ',' << format_double(p.partial_sum) << '\n';
  for (const auto& p : r.series) {
    out << "log_euler_partial_product," << p.n << ',' << format_double(p.log_product) << '\n';
  }
  for (const auto& p : r.series) out << "weighted_pi_sum," << p.n << ',' << format_double(p.weighted_pi_sum) << '\n';
}

}  // namespace polydense
