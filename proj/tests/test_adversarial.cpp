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

#include "kldist/adversarial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "kldist/distribution.hpp"
#include "kldist/errors.hpp"
#include "kldist/sampling.hpp"

namespace kldist {
namespace {

const double kE = std::exp(1.0);

std::size_t Nonzero(const ProbVector& p) { return p.support_size(); }

TEST(MixingWeight, Examples) {
  EXPECT_NEAR(mixing_weight(10, std::exp(-5.0)), 1 - std::exp(-0.5), 1e-15);
  EXPECT_NEAR(mixing_weight(10, std::exp(-5.0)), 0.39347, 1e-5);
  EXPECT_NEAR(mixing_weight(100, std::exp(-10.0)), 1 - std::exp(-0.1), 1e-15);
  EXPECT_NEAR(mixing_weight(100, std::exp(-10.0)), 0.09516, 1e-5);
  EXPECT_NEAR(mixing_weight(40, std::exp(-40.0)), 1 - std::exp(-1.0), 1e-15);
  EXPECT_THROW(mixing_weight(10, 0.0), ValidationError);
  EXPECT_THROW(mixing_weight(0, 0.5), ValidationError);
}

TEST(ConfIndepAdversary, Examples) {
  EXPECT_EQ(conf_indep_adversary(10, 0.1, 0, 5), dirac(5, 0));
  const ProbVector p = conf_indep_adversary(10, std::exp(-5.0), 1, 4);
  EXPECT_NEAR(p[0], std::exp(-0.5), 1e-15);
  EXPECT_NEAR(p[1], 1 - std::exp(-0.5), 1e-15);
  EXPECT_EQ(Nonzero(p), 2u);
  EXPECT_NEAR(std::pow(p[0], 10), std::exp(-5.0), 1e-12 * std::exp(-5.0));
  const ProbVector q = conf_indep_adversary(100, std::exp(-10.0), 3, 4);
  EXPECT_NEAR(q[3], 0.09516, 1e-5);
  EXPECT_THROW(conf_indep_adversary(10, 0.1, 5, 5), ValidationError);
}

TEST(TwoPointFamily, MembersAndEventProbability) {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 2 + gen() % 30;
    const std::uint64_t n = d + gen() % 500;
    const double log_inv = 1.0 + u(gen) * (static_cast<double>(n) - 1.0);
    const double delta = std::exp(-log_inv);
    const TwoPointFamily f = two_point_family(n, d, delta);
    ASSERT_EQ(f.members.size(), d);
    EXPECT_EQ(f.members[0], dirac(d, 0));
    for (std::size_t j = 1; j < d; ++j) {
      const ProbVector& m = f.members[j];
      EXPECT_LE(Nonzero(m), 2u);
      EXPECT_GT(m[j], 0.0);
      const double event = std::exp(static_cast<double>(n) * std::log(m[0]));
      EXPECT_NEAR(event, delta, 1e-12 * delta);
    }
  }
}

TEST(TwoPointFamily, ValidityWarnings) {
  EXPECT_TRUE(two_point_family(100, 10, 0.1).warnings.empty());
  EXPECT_FALSE(two_point_family(5, 10, 0.1).warnings.empty());
  EXPECT_FALSE(two_point_family(100, 10, 0.5).warnings.empty());
}

TEST(SparseSupportInstance, Examples) {
  EXPECT_EQ(sparse_support_instance(10, 6, 1, {}), dirac(6, 0));
  const std::vector<std::size_t> sigma = {1, 4};
  const ProbVector p = sparse_support_instance(10, 6, 3, sigma);
  EXPECT_NEAR(p[0], 1 - 2 / (20 * kE), 1e-15);
  EXPECT_NEAR(p[0], 0.96321, 1e-5);
  EXPECT_NEAR(p[1], 1 / (20 * kE), 1e-16);
  EXPECT_NEAR(p[4], 0.018394, 1e-6);
  EXPECT_EQ(p[2], 0.0);
  double total = 0.0;
  for (double x : p) total += x;
  EXPECT_NEAR(total, 1.0, 1e-15);
  const std::vector<std::size_t> bad = {0, 2};
  EXPECT_THROW(sparse_support_instance(10, 6, 3, bad), ValidationError);
  const std::vector<std::size_t> dup = {2, 2};
  EXPECT_THROW(sparse_support_instance(10, 6, 3, dup), ValidationError);
}

TEST(RandomSupport, UniformOverSubsets) {
  PhiloxRng rng({61, 0});
  std::map<std::set<std::size_t>, int> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const std::vector<std::size_t> s = random_support(6, 3, rng);
    ASSERT_EQ(s.size(), 2u);
    const std::set<std::size_t> set(s.begin(), s.end());
    ASSERT_EQ(set.size(), 2u);
    for (std::size_t j : s) {
      ASSERT_GE(j, 1u);
      ASSERT_LT(j, 6u);
    }
    ++hits[set];
  }
  ASSERT_EQ(hits.size(), 10u);
  const double expected = draws / 10.0;
  for (const auto& [set, count] : hits) {
    EXPECT_NEAR(count, expected, 5 * std::sqrt(expected * 0.9));
  }
}

TEST(ShapeFamily, Examples) {
  const ProbVector a = shape_family(shape::SparseUniform{4, 1.0}, 10);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a[j], 0.25, 1e-16);
  for (std::size_t j = 4; j < 10; ++j) EXPECT_EQ(a[j], 0.0);
  const ProbVector b = shape_family(shape::Polynomial{2.0}, 3);
  EXPECT_NEAR(b[0], 36.0 / 49, 1e-15);
  EXPECT_NEAR(b[1], 9.0 / 49, 1e-15);
  EXPECT_NEAR(b[2], 4.0 / 49, 1e-15);
  const ProbVector c = shape_family(shape::Geometric{std::log(2.0)}, 3);
  EXPECT_NEAR(c[0], 4.0 / 7, 1e-15);
  EXPECT_NEAR(c[1], 2.0 / 7, 1e-15);
  EXPECT_NEAR(c[2], 1.0 / 7, 1e-15);
  const ProbVector d = shape_family(shape::SparseUniform{4, 0.5}, 10);
  EXPECT_NEAR(d[1], 0.125, 1e-16);
  EXPECT_NEAR(d[0], 0.625, 1e-16);
  const ProbVector h = shape_family(shape::HalfUniformGeometric{}, 8);
  EXPECT_NEAR(h[0] / h[3], 1.0, 1e-15);
  EXPECT_NEAR(h[4] / h[0], 0.5, 1e-15);
  EXPECT_NEAR(h[7] / h[4], 0.125, 1e-15);
  EXPECT_EQ(shape_family(shape::Uniform{}, 5), uniform(5));
  EXPECT_THROW(shape_family(shape::Polynomial{1.0}, 5), ValidationError);
  EXPECT_THROW(shape_family(shape::SparseUniform{6, 1.0}, 5), ValidationError);
}

TEST(ShapeFamily, SparseUniformIsSparseAtLargeN) {
  for (std::size_t s : {1u, 2u, 5u, 20u}) {
    const ProbVector p = shape_family(shape::SparseUniform{s, 1.0}, 500);
    const double sd = static_cast<double>(s);
    const double n0 = 2 * sd * std::log(kE * sd);
    for (double n = std::ceil(n0); n < 50 * n0 + 10; n *= 1.5) {
      EXPECT_NEAR(effective_support(p, n), sd, 1e-12);
      const double circ = effective_missing_support(p, n / 2);
      EXPECT_LE(circ, kE * sd * std::exp(-n / (2 * sd)) * (1 + 1e-12));
      EXPECT_LE(circ, 1.0 + 1e-12);
    }
  }
}

// Fixture constants for rate 1/2 at d = 400 over n in [10, 1e7].
TEST(ShapeFamily, GeometricSupportGrowsLogarithmically) {
  const ProbVector p = shape_family(shape::Geometric{0.5}, 400);
  for (double n = 10; n <= 1e7; n *= 3) {
    const double ratio = effective_support(p, n) / std::log(n);
    EXPECT_GE(ratio, 1.0) << n;
    EXPECT_LE(ratio, 4.0) << n;
    EXPECT_LE(effective_missing_support(p, n), 6.0) << n;
  }
}

}  // namespace
}  // namespace kldist
