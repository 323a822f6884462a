#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "polydense/factor_set.hpp"
#include "polydense/sequences.hpp"

namespace polydense {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// a_n = 1 / (n (log n)^r), r > 1; defined from n = 2.
struct InverseNLogR {
  double r = 2.0;
};

/// a_n = 1 / (n log n (log log n)^r), r > 1; defined from n = 3.
struct InverseNLogLogLogR {
  double r = 2.0;
};

/// Caller-supplied positive weights; summability is the caller's claim.
struct CustomWeights {
  std::function<double(std::uint64_t)> evaluate;
  std::uint64_t start = 1;
  std::string label = "custom";
};

/// A positive summable series (a_n), natural logarithms throughout.
class WeightSeries {
 public:
  WeightSeries(InverseNLogR w);
  WeightSeries(InverseNLogLogLogR w);
  WeightSeries(CustomWeights w);

  /// `logr:R` or `loglogr:R`.
  static WeightSeries parse(std::string_view text);

  double operator()(std::uint64_t n) const;
  std::uint64_t start_index() const;
  std::string label() const;

 private:
  std::variant<InverseNLogR, InverseNLogLogLogR, CustomWeights> kind_;
};

/// Sum of p^(-1/alpha) over listed primes p <= N.
double partial_sum_reciprocal(const FactorSet& fs, double alpha, std::uint64_t N);

/// log of prod 1/(1 - p^(-1/alpha)) over listed primes p <= N.
double log_euler_partial_product(const FactorSet& fs, double alpha, std::uint64_t N);
double euler_partial_product(const FactorSet& fs, double alpha, std::uint64_t N);

/// Sum_{n=1}^{N} pi_S(n) / n^(1 + 1/alpha).
double weighted_pi_sum(const PiSTable& table, double alpha, std::uint64_t N);

struct ComparabilityResult {
  bool pass = true;
  std::uint64_t checked = 0;
  /// Smallest relative slack of the strict left inequality and where it occurs.
  double left_slack = 0.0;
  std::uint64_t left_prime = 0;
  /// Smallest relative slack of the right inequality (0 means equality).
  double right_slack = 0.0;
  std::uint64_t right_prime = 0;
  std::uint64_t right_equalities = 0;
  std::uint64_t first_failure = 0;  // 0 when pass
};

/// For every p checks p^(-1/a) < 1/(1 - p^(-1/a)) - 1 <= p^(-1/a)/(1 - 2^(-1/a)).
ComparabilityResult comparability_check(double alpha, std::span<const std::uint64_t> primes);

/// Both sides of the integration-by-parts identity
///   sum_{p<=N} p^(-1/a) = N^(-1/a) pi_S(N) + c * int_1^N pi_S(t) t^(-(1+1/a)) dt
/// with the integral evaluated in closed form between jumps of pi_S.
struct StieltjesTerms {
  double lhs = 0.0;
  double boundary = 0.0;
  double integral = 0.0;  // the bare integral, before the coefficient
  double coefficient = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(1, |lhs|)
};

/// coefficient <= 0 selects the exact value 1/alpha.
StieltjesTerms stieltjes_identity(const PiSTable& table, double alpha, std::uint64_t N, double coefficient = 0.0);
double stieltjes_identity_residual(const PiSTable& table, double alpha, std::uint64_t N);

/// All n in [start, N] with pi_S(n) / n^(1+1/alpha) >= a_n.
std::vector<std::uint64_t> io_witnesses(const PiSTable& table, double alpha, const WeightSeries& weights,
                                        std::uint64_t N);
/// Direct evaluation of the defining inequality at one n.
bool is_io_witness(const PiSTable& table, double alpha, const WeightSeries& weights, std::uint64_t n);

struct HarmonicCheck {
  bool precondition_holds = true;  // s_j <= K j^alpha across the window
  std::uint64_t precondition_violation_index = 0;
  bool holds = false;
  std::uint64_t count = 0;
  double lhs = 0.0;  // sum_{s<=N} s^(-1/alpha)
  double rhs = 0.0;  // K^(-1/alpha) H_count
};

/// Sum_{s<=N} s^(-1/alpha) >= K^(-1/alpha) sum_{j<=n} 1/j, n = card{s <= N}.
HarmonicCheck harmonic_lower_bound_check(const SequenceSpec& spec, double alpha, double K, std::uint64_t N);

struct ChebyshevFit {
  double m_hat = 0.0;
  double M_hat = 0.0;
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

/// min / max over [lo, hi] of pi_S(n) log n / n^(1/alpha); ties go to smaller n.
ChebyshevFit chebyshev_fit(const PiSTable& table, double alpha, std::uint64_t lo, std::uint64_t hi);

struct SeriesPoint {
  std::uint64_t n;
  std::uint64_t pi_s;
  double partial_sum;
  double log_product;
  double weighted_pi_sum;
};

struct DiagnosticsReport {
  double alpha = 1.0;
  std::uint64_t prime_bound = 0;
  std::uint64_t N = 0;
  bool complete = false;
  std::vector<SeriesPoint> series;
  double partial_sum = 0.0;
  double log_product = 0.0;
  double weighted_pi_sum = 0.0;
  StieltjesTerms stieltjes;
  ComparabilityResult comparability;
  std::string weights;
  std::uint64_t witness_count = 0;
  std::vector<std::uint64_t> last_witnesses;
  ChebyshevFit fit;
};

/// Checkpoints 1, 2, 5, 10, 20, 50, ... up to N, plus N itself.
std::vector<std::uint64_t> report_checkpoints(std::uint64_t N);

DiagnosticsReport diagnose(const PiSTable& table, double alpha, std::uint64_t N, const WeightSeries& weights);

nlohmann::ordered_json diagnostics_to_json(const DiagnosticsReport& report);
/// Long-format CSV `metric,n,value`, one row per metric and checkpoint.
void write_diagnostics_csv(const DiagnosticsReport& report, std::ostream& out);

}  // namespace polydense
