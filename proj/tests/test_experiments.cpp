// Copyright 2026 The kldist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "kldist/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kldist/adversarial.hpp"
#include "kldist/distribution.hpp"
#include "kldist/errors.hpp"
#include "kldist/oracle.hpp"
#include "test_support.hpp"

namespace kldist {
namespace {

// Smallest k with P(Bin(t, q) <= k) >= level, by direct summation.
std::uint64_t RefBinomialQuantile(std::uint64_t t, double q, double level) {
  long double cdf = 0.0L;
  for (std::uint64_t k = 0; k <= t; ++k) {
    cdf += testing::binomial_coefficient(t, k) * std::pow(static_cast<long double>(q), k) *
           std::pow(1.0L - q, t - k);
    if (cdf >= level) return k;
  }
  return t;
}

ExperimentConfig Config(ProbVector p, std::uint64_t n, EstimatorSpec spec, double delta,
                        std::uint64_t trials, std::uint64_t seed = 0) {
  ExperimentConfig c;
  c.distribution = std::move(p);
  c.n = n;
  c.spec = spec;
  c.delta = delta;
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

TEST(QuantileBand, OrderStatisticsMatchBinomialRanks) {
  std::vector<double> sorted(100);
  for (int i = 0; i < 100; ++i) sorted[i] = i + 1;
  for (double q : {0.05, 0.5, 0.9, 0.99}) {
    const QuantileBand b = quantile_band(sorted, q, 0.99);
    EXPECT_EQ(b.quantile.value(), std::ceil(q * 100 - 1e-9)) << q;
    const std::uint64_t lo = RefBinomialQuantile(100, q, 0.005);
    const std::uint64_t hi = RefBinomialQuantile(100, q, 0.995) + 1;
    EXPECT_EQ(b.low.value(), lo == 0 ? 0.0 : static_cast<double>(lo)) << q;
    if (hi > 100) {
      EXPECT_TRUE(b.high.is_infinite()) << q;
    } else {
      EXPECT_EQ(b.high.value(), static_cast<double>(hi)) << q;
    }
  }
  EXPECT_THROW(quantile_band({}, 0.5), DomainError);
  EXPECT_THROW(quantile_band(sorted, 1.0), DomainError);
}

TEST(QuantileBand, LeftContinuousInverseAgreesWithExactPathOnTies) {
  std::mt19937_64 gen(81);
  for (int i = 0; i < 50; ++i) {
    const std::size_t t = 10 + gen() % 200;
    std::vector<double> values(t);
    for (double& v : values) v = static_cast<double>(gen() % 5);
    std::sort(values.begin(), values.end());
    std::vector<ExactDistribution::Atom> atoms;
    for (double v : values) atoms.push_back({ExtendedReal(v), 1.0 / t});
    const ExactDistribution exact(atoms);
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      EXPECT_EQ(quantile_band(values, q).quantile, exact.quantile(q)) << t << " " << q;
    }
  }
}

TEST(ClopperPearson, KnownValues) {
  const ProportionInterval zero = clopper_pearson(0, 10, 0.99);
  EXPECT_EQ(zero.low, 0.0);
  EXPECT_NEAR(zero.high, 1 - std::pow(0.005, 0.1), 1e-12);
  const ProportionInterval all = clopper_pearson(10, 10, 0.99);
  EXPECT_NEAR(all.low, std::pow(0.005, 0.1), 1e-12);
  EXPECT_EQ(all.high, 1.0);
  const ProportionInterval half = clopper_pearson(5, 10, 0.99);
  EXPECT_NEAR(half.low + half.high, 1.0, 1e-12);
  EXPECT_EQ(half.estimate, 0.5);
  // At the lower endpoint P(Bin(10, low) >= 5) = 0.005.
  long double tail = 0.0L;
  for (int k = 5; k <= 10; ++k) {
    tail += testing::binomial_coefficient(10, k) * std::pow((long double)half.low, k) *
            std::pow(1.0L - half.low, 10 - k);
  }
  EXPECT_NEAR(static_cast<double>(tail), 0.005, 1e-10);
  EXPECT_THROW(clopper_pearson(3, 2), DomainError);
}

TEST(Validate, RejectsBadConfigs) {
  EXPECT_THROW(validate(Config(uniform(3), 0, spec::Laplace{}, 0.1, 10)), Error);
  EXPECT_THROW(validate(Config(uniform(3), 10, spec::Laplace{}, 1.0, 10)), Error);
  EXPECT_THROW(validate(Config(uniform(3), 10, spec::Laplace{}, 0.1, 0)), Error);
  EXPECT_NO_THROW(validate(Config(uniform(3), 10, spec::Laplace{}, 0.1, 10)));
}

TEST(McStatisticValues, IndependentOfWorkerCount) {
  ExperimentConfig c = Config(shape_family(shape::Geometric{0.2}, 40), 150, spec::Adaptive{}, 0.05, 3000, 17);
  c.workers = 1;
  const std::vector<double> a = mc_statistic_values(c, Statistic::kKlRisk);
  for (unsigned w : {2u, 3u, 8u}) {
    c.workers = w;
    EXPECT_EQ(mc_statistic_values(c, Statistic::kKlRisk), a) << w;
  }
  c.master_seed = 18;
  EXPECT_NE(mc_statistic_values(c, Statistic::kKlRisk), a);
}

TEST(McRiskTail, DiracLaplaceIsConstant) {
  const ExperimentConfig c = Config(dirac(2, 0), 100, spec::Laplace{}, 0.05, 500);
  const std::vector<double> v = mc_statistic_values(c, Statistic::kKlRisk);
  const double constant = std::log(102.0 / 101.0);
  EXPECT_NEAR(constant, 0.00985, 1e-5);
  for (double x : v) EXPECT_NEAR(x, constant, 1e-15);
  const BoundCheckReport r = mc_risk_tail(c);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].bound, BoundId::kLaplaceWhp);
  EXPECT_NEAR(r.reports[0].empirical_quantile.value(), constant, 1e-15);
  EXPECT_NE(r.reports[0].verdict, Verdict::kViolated);
  EXPECT_NE(r.reports[0].verdict, Verdict::kInconclusive);
  EXPECT_EQ(r.trials_used, 500u);
}

TEST(McRiskTail, MissingMassAgreesWithExactLaw) {
  const ProbVector p = make_prob_vector({0.5, 0.5});
  const ExperimentConfig c = Config(p, 2, spec::Laplace{}, 0.3, 20000, 3);
  std::vector<double> v = mc_statistic_values(c, Statistic::kMissingMass);
  std::sort(v.begin(), v.end());
  const double frac = static_cast<double>(std::count(v.begin(), v.end(), 0.5)) / v.size();
  EXPECT_NEAR(frac, 0.5, 5 * std::sqrt(0.25 / v.size()));
  const ExactDistribution exact = exact_statistic_distribution(p, 2, [&](const CountVector& cv) {
    double m = 0.0;
    for (std::size_t j = 0; j < 2; ++j) if (cv[j] == 0) m += p[j];
    return ExtendedReal(m);
  });
  EXPECT_NEAR(exact.tail(ExtendedReal(0.5)), 0.5, 1e-15);
  EXPECT_EQ(quantile_band(v, 0.75).quantile, exact.quantile(0.75));
}

TEST(McRiskTail, MatchesOracleTail) {
  std::mt19937_64 gen(82);
  const ProbVector p = testing::random_prob(gen, 3, 0.0);
  const std::uint64_t n = 8;
  const ExactFunctionals exact = exact_functionals(p, n, spec::Laplace{});
  const ExperimentConfig c = Config(p, n, spec::Laplace{}, 0.05, 100000, 9);
  const std::vector<double> v = mc_statistic_values(c, Statistic::kKlRisk);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double top = exact.risk_distribution.atoms().back().value.value();
  for (int i = 0; i < 10; ++i) {
    const double t = top * u(gen);
    const double want = exact.tail(ExtendedReal(t));
    const double got = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x >= t; })) / v.size();
    EXPECT_NEAR(got, want, 5 * std::sqrt(want * (1 - want) / v.size()) + 1e-12) << t;
  }
  double mean = 0.0;
  double sq = 0.0;
  for (double x : v) {
    mean += x;
    sq += x * x;
  }
  mean /= v.size();
  const double se = std::sqrt((sq / v.size() - mean * mean) / v.size());
  EXPECT_NEAR(mean, exact.expected_kl.value(), 5 * se);
}

TEST(McRiskTail, ReverseKlBoundsHold) {
  ExperimentConfig c = Config(uniform(10), 200, spec::Laplace{}, 0.01, 20000, 4);
  c.bound_ids = {BoundId::kAgrawalReverseKl, BoundId::kTypesReverseKl};
  const BoundCheckReport r = mc_risk_tail(c);
  ASSERT_EQ(r.reports.size(), 2u);
  for (const TailReport& t : r.reports) {
    EXPECT_EQ(t.verdict, Verdict::kHolds) << bound_name(t.bound);
    EXPECT_EQ(t.statistic, Statistic::kReverseKl);
    EXPECT_EQ(t.quantile_order, 0.99);
  }
}

TEST(McRiskTail, NoRegistryBoundViolatedOnDefaultGrid) {
  const std::vector<std::pair<ProbVector, EstimatorSpec>> cases = {
      {uniform(20), spec::Laplace{}},
      {shape_family(shape::Geometric{0.3}, 50), spec::Adaptive{}},
      {shape_family(shape::SparseUniform{5, 1.0}, 60), spec::AdaptiveConf{0.01}},
      {shape_family(shape::Polynomial{1.5}, 30), spec::ConfDependent{0.01}},
  };
  for (const auto& [p, s] : cases) {
    for (std::uint64_t n : {50u, 400u}) {
      ExperimentConfig c = Config(p, n, s, 0.01, 4000, n);
      c.bound_ids = default_tail_bounds(s);
      for (BoundId extra : {BoundId::kMissingMassWhp, BoundId::kMcallesterOrtiz, BoundId::kBenhamou,
                            BoundId::kTypesReverseKl, BoundId::kAgrawalReverseKl, BoundId::kHellingerWhp}) {
        c.bound_ids.push_back(extra);
      }
      for (const TailReport& t : mc_risk_tail(c).reports) {
        EXPECT_NE(t.verdict, Verdict::kViolated) << bound_name(t.bound) << " n=" << n;
      }
    }
  }
}

TEST(McRiskTail, VacuousWhenMultipliedDeltaReachesOne) {
  ExperimentConfig c = Config(uniform(5), 100, spec::Laplace{}, 0.3, 200);
  c.bound_ids = {BoundId::kLaplaceWhp};
  const TailReport t = mc_risk_tail(c).reports.at(0);
  EXPECT_EQ(t.verdict, Verdict::kHoldsVacuous);
  EXPECT_FALSE(t.validity_warnings.empty());
}

TEST(McRiskTail, RejectsLowerBoundsAndWarnsOnSpecMismatch) {
  ExperimentConfig c = Config(uniform(5), 100, spec::Laplace{}, 0.01, 100);
  c.bound_ids = {BoundId::kMinimaxLower};
  EXPECT_THROW(mc_risk_tail(c), NotApplicableError);
  c.bound_ids = {BoundId::kAdaptiveWhp};
  const TailReport t = mc_risk_tail(c).reports.at(0);
  EXPECT_FALSE(t.validity_warnings.empty());
}

TEST(StatisticEnvelope, Values) {
  const ExperimentConfig c = Config(uniform(4), 50, spec::Laplace{}, 0.1, 10);
  EXPECT_NEAR(statistic_envelope(c, Statistic::kKlRisk).value(), std::log(54.0), 1e-14);
  EXPECT_EQ(statistic_envelope(c, Statistic::kMissingMass).value(), 1.0);
  EXPECT_NEAR(statistic_envelope(c, Statistic::kReverseKl).value(), std::log(4.0), 1e-14);
  EXPECT_EQ(statistic_envelope(c, Statistic::kEmpiricalHellinger).value(), 2.0);
  const ExperimentConfig m = Config(uniform(4), 50, spec::Mle{}, 0.1, 10);
  EXPECT_TRUE(statistic_envelope(m, Statistic::kKlRisk).is_infinite());
}

TEST(McExpectation, Examples) {
  const ExpectationResult a = mc_expectation(Config(uniform(4), 20, spec::Laplace{}, 0.05, 100000, 1));
  ASSERT_EQ(a.reports.size(), 1u);
  EXPECT_LE(a.mean.value(), std::log(1 + 3.0 / 21) + kExpectationZ * a.std_error);
  EXPECT_EQ(a.reports[0].verdict, Verdict::kHolds);
  EXPECT_FALSE(a.infinite);
  const ExpectationResult b =
      mc_expectation(Config(shape_family(shape::SparseUniform{3, 1.0}, 30), 60, spec::Adaptive{}, 0.05, 20000, 2));
  ASSERT_EQ(b.reports.size(), 1u);
  EXPECT_EQ(b.reports[0].bound, BoundId::kExpectationAdaptive);
  EXPECT_LE(b.mean.value(), b.reports[0].bound_rhs);
  const ExpectationResult m = mc_expectation(Config(make_prob_vector({0.9, 0.1}), 5, spec::Mle{}, 0.05, 2000, 3));
  EXPECT_TRUE(m.infinite);
  EXPECT_TRUE(m.mean.is_infinite());
}

TEST(LowerBound, LaplaceConfIndependentExample) {
  const double delta = std::exp(-17.0);
  const LowerBoundCheck c = check_lower_bound_construction(
      as_function(spec::Laplace{}), 4000, 4000, delta, 1.0, LowerBoundMode::kConfIndependent);
  EXPECT_EQ(c.branch, "mixture");
  EXPECT_TRUE(c.satisfied);
  EXPECT_NEAR(c.event_probability, delta, 1e-12 * delta);
  const double rho = 1 - std::exp(-17.0 / 4000);
  EXPECT_NEAR(c.adversary[c.witness], rho, 1e-15);
  EXPECT_GE(c.kl_on_event.value(), kl_term(rho, 1.0 / 8000).value());
  EXPECT_NEAR(c.threshold, 17 * std::log(17.0) / (10 * 4000), 1e-15);
}

TEST(LowerBound, UniformDummyViolatesHypothesis) {
  const EstimatorFn dummy = [](const CountVector& c) { return uniform(c.size()); };
  const LowerBoundCheck c =
      check_lower_bound_construction(dummy, 4000, 4000, std::exp(-17.0), 1.0, LowerBoundMode::kConfIndependent);
  EXPECT_EQ(c.branch, "hypothesis-violated");
  EXPECT_EQ(c.adversary, dirac(4000, 0));
  EXPECT_NEAR(c.kl_on_event.value(), std::log(4000.0), 1e-12);
  EXPECT_TRUE(c.satisfied);
}

TEST(LowerBound, BoundaryDeltaWarns) {
  const LowerBoundCheck c = check_lower_bound_construction(
      as_function(spec::Laplace{}), 4000, 4000, std::exp(-16.0), 1.0, LowerBoundMode::kConfIndependent);
  EXPECT_FALSE(c.warnings.empty());
  EXPECT_GT(c.threshold, 0.0);
}

// Laplace puts mass about (d - 1) / (n + d) off class 0, so alpha is close to
// 1 and the Dirac branch applies unless log(1/delta) exceeds 7 sqrt(d).
TEST(LowerBound, TwoPointBranches) {
  const LowerBoundCheck dir = check_lower_bound_construction(
      as_function(spec::Laplace{}), 5000, 50, std::exp(-20.0), 1.0, LowerBoundMode::kTwoPoint);
  EXPECT_EQ(dir.branch, "dirac");
  EXPECT_EQ(dir.adversary, dirac(50, 0));
  EXPECT_EQ(dir.event_probability, 1.0);
  EXPECT_TRUE(dir.satisfied);
  const LowerBoundCheck mix = check_lower_bound_construction(
      as_function(spec::Laplace{}), 5000, 50, std::exp(-60.0), 1.0, LowerBoundMode::kTwoPoint);
  EXPECT_EQ(mix.branch, "mixture");
  EXPECT_NEAR(mix.event_probability, std::exp(-60.0), 1e-12 * std::exp(-60.0));
  EXPECT_NEAR(mix.threshold, std::log(50.0) * 60 / (10 * 5000), 1e-15);
  EXPECT_TRUE(mix.satisfied);
}

TEST(RegimeMap, OneByOneMatchesTail) {
  ExperimentConfig base = Config(uniform(6), 30, spec::Laplace{}, 0.05, 500, 5);
  const std::vector<std::uint64_t> ns = {30};
  const std::vector<double> deltas = {0.05};
  const std::vector<RegimeCell> cells = regime_map(base, ns, deltas);
  ASSERT_EQ(cells.size(), 1u);
  const BoundCheckReport direct = mc_risk_tail(base);
  ASSERT_EQ(cells[0].reports.size(), direct.reports.size());
  EXPECT_EQ(cells[0].reports[0].empirical_quantile, direct.reports[0].empirical_quantile);
  EXPECT_EQ(cells[0].reports[0].bound_rhs, direct.reports[0].bound_rhs);
  const std::vector<std::uint64_t> ns2 = {20, 40, 80};
  const std::vector<double> deltas2 = {0.1, 0.01};
  const std::vector<RegimeCell> full = regime_map(base, ns2, deltas2);
  EXPECT_EQ(full.size(), 6u);
  for (const RegimeCell& cell : full) EXPECT_FALSE(cell.reports.empty());
}

}  // namespace
}  // namespace kldist
