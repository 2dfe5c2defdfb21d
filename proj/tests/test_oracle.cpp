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

#include "kldist/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kldist/bounds.hpp"
#include "kldist/distribution.hpp"
#include "kldist/errors.hpp"
#include "kldist/estimators.hpp"
#include "test_support.hpp"

namespace kldist {
namespace {

TEST(CompositionCount, StarsAndBars) {
  EXPECT_EQ(composition_count(6, 3), 28.0);
  EXPECT_EQ(composition_count(0, 5), 1.0);
  EXPECT_EQ(composition_count(10, 1), 1.0);
  for (std::uint64_t n = 0; n < 30; ++n) {
    for (std::size_t d = 1; d < 8; ++d) {
      EXPECT_EQ(composition_count(n, d), testing::binomial_coefficient(n + d - 1, d - 1));
    }
  }
  EXPECT_TRUE(std::isinf(composition_count(1000000, 1000)));
}

TEST(ForEachCountVector, Examples) {
  const ProbVector p = make_prob_vector({0.3, 0.7});
  std::vector<std::pair<std::vector<std::uint64_t>, double>> seen;
  for_each_count_vector(p, 2, [&](const CountVector& c, double prob) {
    seen.emplace_back(std::vector<std::uint64_t>(c.counts().begin(), c.counts().end()), prob);
  });
  ASSERT_EQ(seen.size(), 3u);
  for (const auto& [c, prob] : seen) {
    if (c[0] == 2) EXPECT_NEAR(prob, 0.09, 1e-15);
    if (c[0] == 1) EXPECT_NEAR(prob, 0.42, 1e-15);
    if (c[0] == 0) EXPECT_NEAR(prob, 0.49, 1e-15);
  }
  const ProbVector q = make_prob_vector({0.2, 0.3, 0.5});
  int visits = 0;
  for_each_count_vector(q, 1, [&](const CountVector& c, double prob) {
    ++visits;
    for (std::size_t j = 0; j < 3; ++j) {
      if (c[j] == 1) EXPECT_NEAR(prob, q[j], 1e-16);
    }
  });
  EXPECT_EQ(visits, 3);
}

TEST(ForEachCountVector, ProbabilitiesMatchMultinomialPmf) {
  std::mt19937_64 gen(71);
  for (int i = 0; i < 60; ++i) {
    const std::size_t d = 2 + gen() % 4;
    const std::uint64_t n = gen() % 15;
    const ProbVector p = testing::random_prob(gen, d, 0.2);
    const std::vector<double> pv(p.begin(), p.end());
    double total = 0.0;
    std::uint64_t visits = 0;
    for_each_count_vector(p, n, [&](const CountVector& c, double prob) {
      ++visits;
      total += prob;
      const std::vector<std::uint64_t> cv(c.counts().begin(), c.counts().end());
      EXPECT_NEAR(prob, testing::multinomial_pmf(pv, cv), 1e-13);
    });
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(static_cast<double>(visits), composition_count(n, d));
  }
}

TEST(ForEachCountVector, CapExceeded) {
  EXPECT_THROW(for_each_count_vector(uniform(10), 100, [](const CountVector&, double) {}),
               CapExceededError);
  EXPECT_THROW(for_each_count_vector(uniform(3), 10, [](const CountVector&, double) {}, 50),
               CapExceededError);
}

TEST(ExactDistribution, QuantileAndTailConventions) {
  const ExactDistribution x({{ExtendedReal(2.0), 0.25}, {ExtendedReal(1.0), 0.5}, {ExtendedReal(2.0), 0.25}});
  ASSERT_EQ(x.atoms().size(), 2u);
  EXPECT_EQ(x.quantile(0.5).value(), 1.0);
  EXPECT_EQ(x.quantile(0.5000001).value(), 2.0);
  EXPECT_EQ(x.quantile(1.0).value(), 2.0);
  EXPECT_EQ(x.tail(ExtendedReal(2.0)), 0.5);
  EXPECT_EQ(x.tail(ExtendedReal(1.5)), 0.5);
  EXPECT_EQ(x.tail(ExtendedReal(1.0)), 1.0);
  EXPECT_EQ(x.tail(ExtendedReal(2.5)), 0.0);
  EXPECT_NEAR(x.expectation().value(), 1.5, 1e-15);
  EXPECT_THROW(x.quantile(0.0), Error);
  EXPECT_EQ(x.to_csv(), "value,probability\n1,0.5\n2,0.5\n");
  const ExactDistribution y({{ExtendedReal::Infinity(), 0.1}, {ExtendedReal(0.0), 0.9}});
  EXPECT_TRUE(y.expectation().is_infinite());
  EXPECT_TRUE(y.quantile(0.95).is_infinite());
  EXPECT_EQ(y.quantile(0.9).value(), 0.0);
  const ExactDistribution z({{ExtendedReal::Infinity(), 0.0}, {ExtendedReal(3.0), 1.0}});
  EXPECT_EQ(z.expectation().value(), 3.0);
  EXPECT_THROW(ExactDistribution({{ExtendedReal(1.0), -0.1}}), ValidationError);
}

TEST(ExactFunctionals, Examples) {
  for (std::uint64_t n : {1u, 5u, 20u}) {
    for (std::size_t d : {2u, 3u, 5u}) {
      const ExactFunctionals f = exact_functionals(dirac(d, 0), n, spec::Laplace{});
      EXPECT_NEAR(f.expected_kl.value(), std::log((n + static_cast<double>(d)) / (n + 1.0)), 1e-15);
      EXPECT_EQ(f.risk_distribution.atoms().size(), 1u);
    }
  }
  const ExactFunctionals g = exact_functionals(make_prob_vector({0.5, 0.5}), 2, spec::Laplace{});
  const double atom = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
  EXPECT_NEAR(g.expected_kl.value(), 0.5 * atom, 1e-15);
  EXPECT_LE(g.expected_kl.value(), std::log(4.0 / 3.0));
  EXPECT_NEAR(g.expected_missing, 0.25, 1e-15);
  EXPECT_NEAR(g.expected_distinct, 1.5, 1e-15);
  EXPECT_NEAR(g.tail(ExtendedReal(atom)), 0.5, 1e-15);
  EXPECT_EQ(g.quantile(0.5).value(), 0.0);
  EXPECT_NEAR(g.quantile(0.75).value(), atom, 1e-15);
}

TEST(ExactFunctionals, MleRiskIsInfiniteWhenClassesCanBeMissed) {
  const ExactFunctionals f = exact_functionals(make_prob_vector({0.9, 0.1}), 3, spec::Mle{});
  EXPECT_TRUE(f.expected_kl.is_infinite());
  // Infinite exactly when one of the two classes is never drawn.
  EXPECT_NEAR(f.tail(ExtendedReal::Infinity()), std::pow(0.9, 3) + std::pow(0.1, 3), 1e-15);
}

TEST(ExactFunctionals, ClosedFormsAndExpectationBounds) {
  std::mt19937_64 gen(72);
  for (int i = 0; i < 80; ++i) {
    const std::size_t d = 2 + gen() % 4;
    const std::uint64_t n = 2 + gen() % 10;
    const ProbVector p = testing::random_prob(gen, d, 0.15);
    const ExactFunctionals lap = exact_functionals(p, n, spec::Laplace{});
    EXPECT_NEAR(lap.total_probability, 1.0, 1e-12);
    const double em = expected_missing_mass(p, n);
    const double ed = expected_distinct(p, n);
    EXPECT_NEAR(lap.expected_missing, em, 1e-12 * std::max(em, 1e-300));
    EXPECT_NEAR(lap.expected_distinct, ed, 1e-12 * ed);
    EXPECT_LE(lap.expected_kl.value(),
              bound_value(BoundId::kExpectationLaplace, {{"n", double(n)}, {"d", double(d)}}).value + 1e-12);
    if (d >= 3 && n >= 4) {
      const ExactFunctionals ada = exact_functionals(p, n, spec::Adaptive{});
      const double nn = static_cast<double>(n);
      const BoundParams params = {{"n", nn},
                                  {"d", double(d)},
                                  {"s_n", effective_support(p, nn)},
                                  {"s_circ", effective_missing_support(p, nn / 2)}};
      EXPECT_LE(ada.expected_kl.value(), bound_value(BoundId::kExpectationAdaptive, params).value + 1e-12);
    }
  }
}

TEST(ExactStatisticDistribution, DistinctCountLaw) {
  const ProbVector p = make_prob_vector({0.5, 0.5});
  const ExactDistribution x = exact_statistic_distribution(
      p, 3, [](const CountVector& c) { return ExtendedReal(static_cast<double>(c.distinct())); });
  ASSERT_EQ(x.atoms().size(), 2u);
  EXPECT_NEAR(x.atoms()[0].probability, 0.25, 1e-15);
  EXPECT_NEAR(x.atoms()[1].probability, 0.75, 1e-15);
}

}  // namespace
}  // namespace kldist
