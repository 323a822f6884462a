#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "polydense/diagnostics.hpp"
#include "polydense/error.hpp"

using namespace polydense;

namespace {

const PrimeSieve& sieve() {
  static const PrimeSieve s(1'000'000);
  return s;
}

// P(S) for S = all positive integers: every prime.
FactorSet all_primes(std::uint64_t bound) { return factor_set_exact(sieve(), ArithmeticProgression{1, 0}, bound); }

FactorSet explicit_primes(std::vector<std::uint64_t> primes, std::uint64_t bound) {
  FactorSet fs;
  fs.sequence = ExplicitList{primes};
  fs.prime_bound = bound;
  fs.complete = true;
  for (auto p : primes) fs.entries.push_back({p, p});
  return fs;
}

}  // namespace

TEST(Diagnostics, CompensatedSumRecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-17);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-14, 1e-20);  // plain summation gives 0
}

TEST(Diagnostics, WeightSeries) {
  const auto w = WeightSeries::parse("logr:2");
  EXPECT_EQ(w.start_index(), 2u);
  EXPECT_DOUBLE_EQ(w(10), 1.0 / (10.0 * std::log(10.0) * std::log(10.0)));
  const auto ll = WeightSeries::parse("loglogr:1.5");
  EXPECT_EQ(ll.start_index(), 3u);
  EXPECT_EQ(ll.label(), "loglogr:1.5");
  EXPECT_THROW(WeightSeries::parse("logr:1"), PreconditionError);
  EXPECT_THROW(WeightSeries::parse("logr:x"), PreconditionError);
  EXPECT_THROW(WeightSeries::parse("exp:2"), PreconditionError);
  EXPECT_THROW(w(1), PreconditionError);
}

TEST(Diagnostics, MertensPartialSums) {
  const auto fs = all_primes(1'000'000);
  const double s5 = partial_sum_reciprocal(fs, 1.0, 100'000);
  const double s6 = partial_sum_reciprocal(fs, 1.0, 1'000'000);
  EXPECT_NEAR(s5, 2.705272179047264, 1e-12);
  EXPECT_NEAR(s6, 2.887328099567673, 1e-12);
  EXPECT_NEAR(s6, std::log(std::log(1e6)) + 0.2615, 0.05);
}

TEST(Diagnostics, EulerProductOverSmallPrimes) {
  const auto fs = explicit_primes({2, 3, 5, 7}, 10);
  EXPECT_NEAR(euler_partial_product(fs, 1.0, 10), 4.375, 1e-12);
  EXPECT_NEAR(log_euler_partial_product(fs, 1.0, 10), std::log(4.375), 1e-14);
  EXPECT_DOUBLE_EQ(euler_partial_product(fs, 1.0, 1), 1.0);
}

TEST(Diagnostics, WeightedPiSum) {
  const PiSTable table(all_primes(10'000));
  const double w3 = weighted_pi_sum(table, 1.0, 1000);
  const double w4 = weighted_pi_sum(table, 1.0, 10'000);
  EXPECT_NEAR(w3, 2.2843118074308495, 1e-12);
  EXPECT_NEAR(w4, 2.614372398462907, 1e-12);
  EXPECT_GT(w4, w3);
}

TEST(Diagnostics, ComparabilityHoldsWithEqualityAtTwo) {
  const auto primes = sieve().primes_up_to(1'000'000);
  for (double alpha : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    const auto r = comparability_check(alpha, primes);
    EXPECT_TRUE(r.pass) << alpha;
    EXPECT_EQ(r.checked, primes.size());
    EXPECT_EQ(r.right_prime, 2u);
    EXPECT_EQ(r.right_slack, 0.0);
    EXPECT_GE(r.right_equalities, 1u);
    EXPECT_GT(r.left_slack, 0.0);
  }
}

TEST(Diagnostics, StieltjesIdentityHoldsWithInverseAlpha) {
  const PiSTable table(all_primes(100'000));
  for (double alpha : {1.0, 2.0, 3.0}) {
    for (std::uint64_t N : {2u, 3u, 100u, 99'991u, 100'000u}) {
      const auto t = stieltjes_identity(table, alpha, N);
      EXPECT_LE(t.residual, 1e-9) << alpha << " " << N;
      EXPECT_DOUBLE_EQ(t.coefficient, 1.0 / alpha);
    }
  }
  EXPECT_NEAR(stieltjes_identity(table, 2.0, 10'000).lhs, 29.14369305871696, 1e-10);
}

TEST(Diagnostics, SingleAtomRejectsOnePlusInverseAlpha) {
  // pi_S jumps once, at 2. By hand: lhs = 2^(-1/a), boundary = N^(-1/a),
  // integral = a (2^(-1/a) - N^(-1/a)); the identity needs coefficient 1/a.
  const PiSTable table(explicit_primes({2}, 100));
  const double alpha = 2.0, N = 100.0;
  const double lhs = std::pow(2.0, -0.5);
  const double integral = alpha * (std::pow(2.0, -0.5) - std::pow(N, -0.5));
  const auto good = stieltjes_identity(table, alpha, 100);
  EXPECT_NEAR(good.lhs, lhs, 1e-15);
  EXPECT_NEAR(good.integral, integral, 1e-14);
  EXPECT_LE(good.residual, 1e-14);
  const auto bad = stieltjes_identity(table, alpha, 100, 1.0 + 1.0 / alpha);
  EXPECT_NEAR(bad.rhs, std::pow(N, -0.5) + 1.5 * integral, 1e-14);
  EXPECT_GT(bad.residual, 0.5);
}

TEST(Diagnostics, IoWitnessesForAllPrimes) {
  const PiSTable table(all_primes(1'000'000));
  const auto w = WeightSeries::parse("logr:2");
  const auto witnesses = io_witnesses(table, 1.0, w, 1'000'000);
  ASSERT_EQ(witnesses.size(), 999'996u);
  EXPECT_EQ(witnesses.front(), 5u);
  EXPECT_EQ(witnesses.back(), 1'000'000u);
  for (std::uint64_t n : {2u, 3u, 4u}) EXPECT_FALSE(is_io_witness(table, 1.0, w, n));
  // multiplied and divided forms agree on every reported witness
  for (std::size_t i = 0; i < witnesses.size(); i += 997) {
    ASSERT_TRUE(is_io_witness(table, 1.0, w, witnesses[i]));
  }
}

TEST(Diagnostics, NoWitnessesForPowersOfTwoAtLargeN) {
  const PiSTable table(factor_set_by_scan(sieve(), parse_sequence("pow2"), 1ull << 62, 100'000));
  const auto witnesses = io_witnesses(table, 1.0, WeightSeries::parse("logr:2"), 100'000);
  // pi_S(n) = 1 and (log n)^2 < n for every n >= 2
  EXPECT_TRUE(witnesses.empty());
}

TEST(Diagnostics, HarmonicLowerBound) {
  const auto ap = harmonic_lower_bound_check(parse_sequence("ap:1,0"), 1.0, 1.0, 1000);
  EXPECT_TRUE(ap.precondition_holds);
  EXPECT_TRUE(ap.holds);
  EXPECT_EQ(ap.count, 1000u);
  EXPECT_NEAR(ap.lhs, ap.rhs, 1e-12);
  const auto squares = harmonic_lower_bound_check(parse_sequence("poly:1,0,1"), 2.0, 2.0, 1'000'000);
  EXPECT_TRUE(squares.precondition_holds);
  EXPECT_TRUE(squares.holds);
  const auto broken = harmonic_lower_bound_check(parse_sequence("pow2"), 2.0, 2.0, 1000);
  EXPECT_FALSE(broken.precondition_holds);
  EXPECT_EQ(broken.precondition_violation_index, 7u);  // 2^7 > 2 * 7^2
}

TEST(Diagnostics, ChebyshevFitForAllPrimes) {
  const PiSTable table(all_primes(1'000'000));
  const auto fit = chebyshev_fit(table, 1.0, 2, 1'000'000);
  EXPECT_NEAR(fit.m_hat, 0.34657359027997264, 1e-15);
  EXPECT_EQ(fit.argmin, 2u);
  EXPECT_NEAR(fit.M_hat, 1.2550587129324797, 1e-14);
  EXPECT_EQ(fit.argmax, 113u);
  for (std::uint64_t n : {2u, 113u, 5000u, 999'983u}) {
    const double r = table(n) * std::log(double(n)) / double(n);
    EXPECT_GE(r, fit.m_hat);
    EXPECT_LE(r, fit.M_hat);
  }
}

TEST(Diagnostics, CheckpointsAndReport) {
  EXPECT_EQ(report_checkpoints(1000), (std::vector<std::uint64_t>{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}));
  EXPECT_EQ(report_checkpoints(30), (std::vector<std::uint64_t>{1, 2, 5, 10, 20, 30}));
  const PiSTable table(all_primes(10'000));
  const auto report = diagnose(table, 1.0, 10'000, WeightSeries::parse("logr:2"));
  EXPECT_DOUBLE_EQ(report.partial_sum, partial_sum_reciprocal(table.factor_set(), 1.0, 10'000));
  EXPECT_DOUBLE_EQ(report.weighted_pi_sum, weighted_pi_sum(table, 1.0, 10'000));
  EXPECT_TRUE(report.comparability.pass);
  EXPECT_LE(report.stieltjes.residual, 1e-9);
  EXPECT_EQ(report.series.back().n, 10'000u);
  EXPECT_EQ(report.series.back().pi_s, 1229u);
  std::ostringstream csv;
  write_diagnostics_csv(report, csv);
  EXPECT_EQ(csv.str().rfind("metric,n,value\n", 0), 0u);
  const auto j = diagnostics_to_json(report);
  EXPECT_EQ(j.at("log"), "natural");
}

TEST(Diagnostics, Preconditions) {
  const PiSTable table(all_primes(100));
  EXPECT_THROW(weighted_pi_sum(table, 0.5, 10), PreconditionError);
  EXPECT_THROW(weighted_pi_sum(table, 1.0, 101), PreconditionError);
  EXPECT_THROW(chebyshev_fit(table, 1.0, 1, 10), PreconditionError);
  EXPECT_THROW(comparability_check(1.0, std::vector<std::uint64_t>{}), PreconditionError);
}
