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

#include "kldist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kldist/errors.hpp"

namespace kldist {
namespace {

// Moves the residual 1 - sum(p) into the largest entry, which is the entry
// whose relative precision suffers least.
void AbsorbResidual(std::vector<double>& p) {
  CompensatedSum total;
  for (double x : p) total.add(x);
  const auto largest = std::max_element(p.begin(), p.end());
  *largest = std::max(0.0, *largest + (1.0 - total.value()));
}

void CheckPositiveN(double n, const char* where) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError(std::string(where) + ": sample size must be positive");
  }
}

// (1 - p)^n for p in [0, 1].
double SurvivalPower(double p, double n) {
  if (p >= 1.0) return n == 0.0 ? 1.0 : 0.0;
  return std::exp(n * std::log1p(-p));
}

bool IsInteger(double n) {
  return n == std::floor(n) && n <= 9007199254740992.0;
}

// All subset sums of `values`, sorted ascending.
std::vector<double> SortedSubsetSums(std::span<const double> values) {
  std::vector<double> sums{0.0};
  sums.reserve(std::size_t{1} << values.size());
  for (double v : values) {
    const std::size_t m = sums.size();
    for (std::size_t i = 0; i < m; ++i) sums.push_back(sums[i] + v);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

// Labels of P sorted by decreasing probability; ties keep label order.
std::vector<std::size_t> DescendingOrder(const ProbVector& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  return order;
}

}  // namespace

ProbVector ProbVector::FromProbabilities(std::vector<double> probs) {
  if (probs.size() < 2) {
    throw ValidationError("ProbVector: need at least 2 classes");
  }
  CompensatedSum total;
  for (double x : probs) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ValidationError("ProbVector: entries must be finite and >= 0");
    }
    total.add(x);
  }
  if (std::abs(total.value() - 1.0) > kNormalizationTolerance) {
    throw ValidationError("ProbVector: entries sum to " +
                          std::to_string(total.value()) + ", not 1");
  }
  AbsorbResidual(probs);
  return ProbVector(std::move(probs));
}

std::size_t ProbVector::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(probs_.begin(), probs_.end(), [](double x) { return x > 0; }));
}

ProbVector make_prob_vector(std::span<const double> weights) {
  if (weights.size() < 2) {
    throw ValidationError("make_prob_vector: need at least 2 weights");
  }
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("make_prob_vector: weights must be finite and >= 0");
    }
    total.add(w);
  }
  const double z = total.value();
  if (!(z > 0.0)) {
    throw ValidationError("make_prob_vector: all weights are zero");
  }
  std::vector<double> p(weights.begin(), weights.end());
  for (double& x : p) x /= z;
  AbsorbResidual(p);
  return ProbVector(std::move(p));
}

ProbVector dirac(std::size_t d, std::size_t label) {
  if (label >= d) throw ValidationError("dirac: label out of range");
  std::vector<double> w(d, 0.0);
  w[label] = 1.0;
  return make_prob_vector(w);
}

ProbVector uniform(std::size_t d) {
  return make_prob_vector(std::vector<double>(d, 1.0));
}

ExtendedReal kl_divergence(const ProbVector& p, const ProbVector& q) {
  return kl_divergence(p.probs(), q.probs());
}

double hellinger_sq(const ProbVector& p, const ProbVector& q) {
  return hellinger_sq(p.probs(), q.probs());
}

double effective_support(const ProbVector& p, double n) {
  CheckPositiveN(n, "effective_support");
  CompensatedSum s;
  for (double pj : p) s.add(std::min(n * pj, 1.0));
  return s.value();
}

double effective_missing_support(const ProbVector& p, double n) {
  CheckPositiveN(n, "effective_missing_support");
  CompensatedSum s;
  for (double pj : p) {
    const double x = n * pj;
    s.add(std::min(std::exp(1.0 - x), x));
  }
  return s.value();
}

double poisson_missing_support(const ProbVector& p, double n) {
  CheckPositiveN(n, "poisson_missing_support");
  CompensatedSum s;
  for (double pj : p) {
    const double x = n * pj;
    s.add(x * std::exp(-x));
  }
  return s.value();
}

double expected_distinct(const ProbVector& p, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  CompensatedSum s;
  for (double pj : p) {
    if (pj >= 1.0) {
      s.add(n == 0 ? 0.0 : 1.0);
    } else {
      s.add(-std::expm1(nn * std::log1p(-pj)));
    }
  }
  return s.value();
}

double expected_missing_mass(const ProbVector& p, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  CompensatedSum s;
  for (double pj : p) s.add(pj * SurvivalPower(pj, nn));
  return s.value();
}

double expected_new_classes(const ProbVector& p, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  CompensatedSum s;
  for (double pj : p) {
    if (pj >= 1.0) continue;
    const double log_q = nn * std::log1p(-pj);
    s.add(std::exp(log_q) * -std::expm1(log_q));
  }
  return s.value();
}

double occupancy_variance_proxy(const ProbVector& p, double n) {
  CheckPositiveN(n, "occupancy_variance_proxy");
  CompensatedSum s;
  for (double pj : p) {
    const double x = n * pj;
    if (x < 1e-2) {
      // 1 - (1 + x) e^{-x} = x^2/2 - x^3/3 + x^4/8 - x^5/30 + ...
      s.add(x * x * (0.5 + x * (-1.0 / 3.0 + x * (0.125 - x / 30.0))));
    } else {
      s.add(-std::expm1(-x) - x * std::exp(-x));
    }
  }
  return s.value();
}

SparsityProfile sparsity_profile(const ProbVector& p, double n) {
  CheckPositiveN(n, "sparsity_profile");
  SparsityProfile out;
  out.n = n;
  out.s_n = effective_support(p, n);
  out.s_circ = effective_missing_support(p, n);
  out.s_bullet = poisson_missing_support(p, n);
  out.d_n_plus = occupancy_variance_proxy(p, n);
  if (IsInteger(n)) {
    const auto k = static_cast<std::uint64_t>(n);
    out.expected_distinct = expected_distinct(p, k);
    out.expected_missing = expected_missing_mass(p, k);
    if (k >= 3) out.s_diamond = expected_new_classes(p, k);
  }
  return out;
}

EpsBarResult eps_bar(const ProbVector& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("eps_bar: eps must lie in (0, 1)");
  }
  std::vector<double> positive;
  for (double pj : p) {
    if (pj > 0.0) positive.push_back(pj);
  }
  std::sort(positive.begin(), positive.end(), std::greater<>());

  // Sorted-suffix shortcut: if the mass after the last entry >= eps is below
  // eps, every subset sum >= eps contains an entry >= that last one.
  std::size_t above = 0;
  while (above < positive.size() && positive[above] >= eps) ++above;
  if (above > 0) {
    double tail = 0.0;
    for (std::size_t j = above; j < positive.size(); ++j) tail += positive[j];
    if (tail < eps) return {positive[above - 1], true};
  }

  if (positive.size() > kEpsBarExactCap) return {eps, false};

  const std::size_t half = positive.size() / 2;
  const std::vector<double> left =
      SortedSubsetSums(std::span<const double>(positive).first(half));
  const std::vector<double> right =
      SortedSubsetSums(std::span<const double>(positive).subspan(half));
  double best = 1.0;
  for (double a : left) {
    auto it = std::lower_bound(right.begin(), right.end(), eps - a);
    while (it != right.end() && a + *it < eps) ++it;
    if (it != right.end()) best = std::min(best, a + *it);
  }
  return {std::min(best, 1.0), true};
}

GapWitness gap_characterization(const ProbVector& p, double eps,
                                double target) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw DomainError("gap_characterization: eps must lie in (0, 1/2)");
  }
  if (!(target >= 2.0 * eps)) {
    throw DomainError("gap_characterization: target must be >= 2 eps");
  }
  const std::vector<std::size_t> order = DescendingOrder(p);
  // Any witness is the last entry >= eps: later entries must sum below eps.
  std::size_t above = 0;
  while (above < order.size() && p[order[above]] >= eps) ++above;
  GapWitness out;
  if (above == 0) return out;
  CompensatedSum tail;
  for (std::size_t r = above; r < order.size(); ++r) tail.add(p[order[r]]);
  const std::size_t rank = above - 1;
  const double candidate = p[order[rank]];
  if (candidate >= target && tail.value() < eps) {
    out.holds = true;
    out.rank = rank;
    out.label = order[rank];
    out.probability = candidate;
  }
  return out;
}

CriticalSamples critical_samples(const ProbVector& p, double eps, double delta,
                                 std::uint64_t cap) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("critical_samples: eps must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("critical_samples: delta must lie in (0, 1)");
  }
  const double d = static_cast<double>(p.size());
  auto require = [&](std::optional<std::uint64_t> n, const char* name) {
    if (!n) {
      throw CapExceededError(std::string("critical_samples: ") + name +
                                 " not reached within cap",
                             static_cast<double>(cap), static_cast<double>(cap));
    }
    return *n;
  };

  CriticalSamples out;
  out.n_obs = require(first_satisfying(
                          [&](std::uint64_t n) {
                            const double x = static_cast<double>(n);
                            return effective_support(p, x) / x <= eps;
                          },
                          cap),
                      "n_obs");
  out.n_circ = require(first_satisfying(
                           [&](std::uint64_t n) {
                             const double x = static_cast<double>(n);
                             return effective_missing_support(p, x) / x <= eps;
                           },
                           cap),
                       "n_circ");
  out.n_exp = require(first_satisfying(
                          [&](std::uint64_t n) {
                            return expected_missing_mass(p, n) <= eps;
                          },
                          cap),
                      "n_exp");
  out.n_dev = std::log(d) * std::log(1.0 / delta) / eps;

  // log(e d / (eps n)) > 0 iff n < e d / eps.
  const double limit = std::exp(1.0) * d / eps;
  auto n_max = static_cast<std::uint64_t>(std::ceil(limit)) - 1;
  while (n_max > 1 && !(std::log(limit / static_cast<double>(n_max)) > 0.0)) {
    --n_max;
  }
  n_max = std::min(n_max, cap);
  const auto n_miss = first_satisfying(
      [&](std::uint64_t n) {
        const double x = static_cast<double>(n);
        const double denom = std::log(limit / x);
        return effective_missing_support(p, x) / x <= eps / denom;
      },
      n_max);
  out.n_miss = n_miss.value_or(n_max);
  out.n_miss_at_boundary = !n_miss.has_value();
  return out;
}

}  // namespace kldist
