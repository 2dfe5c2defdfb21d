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

// Exact laws of sample statistics for small (n, d), by enumerating the
// C(n + d - 1, d - 1) count vectors instead of the d^n raw samples. Every
// estimator in this library is a function of the counts, so this is exact.

#ifndef KLDIST_ORACLE_HPP_
#define KLDIST_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kldist/distribution.hpp"
#include "kldist/estimators.hpp"
#include "kldist/numerics.hpp"

namespace kldist {

inline constexpr double kDefaultCompositionCap = 5e6;

// C(n + d - 1, d - 1); +inf once it exceeds 2^64.
double composition_count(std::uint64_t n, std::size_t d);

using CountVisitor =
    std::function<void(const CountVector& counts, double probability)>;

// Calls `visit` once per composition of n into p.size() parts, with its
// multinomial probability n! / prod(N_j!) prod(p_j^N_j) evaluated in log
// space. Compositions that put counts on zero-probability classes are visited
// with probability 0. Throws CapExceededError when the composition count
// exceeds `cap`.
void for_each_count_vector(const ProbVector& p, std::uint64_t n,
                           const CountVisitor& visit,
                           double cap = kDefaultCompositionCap);

// A finitely supported law on the extended reals.
class ExactDistribution {
 public:
  struct Atom {
    ExtendedReal value;
    double probability = 0.0;
  };

  ExactDistribution() = default;
  // Sorts by value and merges atoms with identical values. Throws
  // ValidationError for a negative probability.
  explicit ExactDistribution(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_probability() const;
  // +inf when an atom with positive probability is infinite.
  ExtendedReal expectation() const;
  // P(X >= t).
  double tail(ExtendedReal t) const;
  // Smallest atom value whose cumulative probability reaches q, for q in
  // (0, 1]; the largest atom when rounding leaves the total just below q.
  ExtendedReal quantile(double q) const;
  // "value,probability" header then one row per atom.
  std::string to_csv() const;

 private:
  std::vector<Atom> atoms_;
};

using CountStatistic = std::function<ExtendedReal(const CountVector&)>;

// The exact law of statistic(counts) under Multinomial(n, P).
ExactDistribution exact_statistic_distribution(
    const ProbVector& p, std::uint64_t n, const CountStatistic& statistic,
    double cap = kDefaultCompositionCap);

struct ExactFunctionals {
  ExtendedReal expected_kl;
  double expected_missing = 0.0;
  double expected_distinct = 0.0;
  // Sum of all enumerated probabilities; 1 up to rounding.
  double total_probability = 0.0;
  ExactDistribution risk_distribution;

  double tail(ExtendedReal t) const { return risk_distribution.tail(t); }
  ExtendedReal quantile(double q) const { return risk_distribution.quantile(q); }
};

// Exact law of KL(P, estimate(spec, counts)) together with E[M_n] and E[D_n]
// over the same enumeration. Requires n >= 1.
ExactFunctionals exact_functionals(const ProbVector& p, std::uint64_t n,
                                   const EstimatorSpec& spec,
                                   double cap = kDefaultCompositionCap);

}  // namespace kldist

#endif  // KLDIST_ORACLE_HPP_
