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

// Probability vectors on {0, ..., d-1} and the distribution functionals that
// govern estimation and missing-mass behaviour at a given sample size n:
// effective support sizes, expected occupancy and missing mass, the smallest
// subset sum above a level, and critical sample sizes.
//
// Class labels are 0-based throughout the library. Zero-probability classes
// are kept in place; labels are never compacted.

#ifndef KLDIST_DISTRIBUTION_HPP_
#define KLDIST_DISTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "kldist/numerics.hpp"

namespace kldist {

// Absolute tolerance on sum(p) - 1 accepted by ProbVector::FromProbabilities.
inline constexpr double kNormalizationTolerance = 1e-12;

// A probability distribution over d >= 2 labelled classes.
class ProbVector {
 public:
  // Validates probabilities that already sum to 1 within
  // kNormalizationTolerance, then absorbs the residual rounding into the
  // largest entry. Throws ValidationError.
  static ProbVector FromProbabilities(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }
  std::span<const double> probs() const { return probs_; }
  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

  // Number of classes with positive probability.
  std::size_t support_size() const;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  friend ProbVector make_prob_vector(std::span<const double> weights);

  std::vector<double> probs_;
};

// Normalizes nonnegative weights (at least two entries, at least one
// positive). Zeros stay exactly zero.
ProbVector make_prob_vector(std::span<const double> weights);
inline ProbVector make_prob_vector(std::initializer_list<double> weights) {
  return make_prob_vector(std::span<const double>(weights.begin(), weights.size()));
}

// The Dirac mass at `label` among d classes.
ProbVector dirac(std::size_t d, std::size_t label);
ProbVector uniform(std::size_t d);

ExtendedReal kl_divergence(const ProbVector& p, const ProbVector& q);
double hellinger_sq(const ProbVector& p, const ProbVector& q);

// s_n(P) = sum_j min(n p_j, 1). Accepts any real n > 0.
double effective_support(const ProbVector& p, double n);
// s_n°(P) = sum_j min(e^{1 - n p_j}, n p_j). Accepts any real n > 0.
double effective_missing_support(const ProbVector& p, double n);
// s_n•(P) = sum_j (n p_j) e^{-n p_j}.
double poisson_missing_support(const ProbVector& p, double n);
// E[D_n] = sum_j 1 - (1 - p_j)^n for an integer sample size n.
double expected_distinct(const ProbVector& p, std::uint64_t n);
// E[M_n] = sum_j p_j (1 - p_j)^n.
double expected_missing_mass(const ProbVector& p, std::uint64_t n);
// E[D_2n - D_n] = sum_j (1 - p_j)^n (1 - (1 - p_j)^n).
double expected_new_classes(const ProbVector& p, std::uint64_t n);
// d_n^+(P) = sum_j 1 - (n p_j + 1) e^{-n p_j}. Accepts any real n > 0.
double occupancy_variance_proxy(const ProbVector& p, double n);

struct SparsityProfile {
  double n = 0.0;
  double s_n = 0.0;
  double s_circ = 0.0;
  double s_bullet = 0.0;
  // Present only for integer n >= 3.
  std::optional<double> s_diamond;
  // Present only for integer n.
  std::optional<double> expected_distinct;
  std::optional<double> expected_missing;
  double d_n_plus = 0.0;
};

// All effective-sparsity functionals at sample size n. Throws DomainError for
// n <= 0.
SparsityProfile sparsity_profile(const ProbVector& p, double n);

struct EpsBarResult {
  double value = 0.0;
  // False when the dimension was too large for exact enumeration and no
  // shortcut applied; `value` is then the conservative lower bound eps.
  bool exact = true;
};

// Largest number of positive classes handled by exact meet-in-the-middle
// subset-sum enumeration.
inline constexpr std::size_t kEpsBarExactCap = 34;

// Infimum of the subset sums of P lying in [eps, 1]. Requires 0 < eps < 1.
EpsBarResult eps_bar(const ProbVector& p, double eps);

struct GapWitness {
  bool holds = false;
  // Position (0-based) of the witness in the descending order of P.
  std::size_t rank = 0;
  // Class label of the witness.
  std::size_t label = 0;
  // Its probability; equals eps_bar(P, eps) when `holds`.
  double probability = 0.0;
};

// Decides whether some class, in descending order, has probability at least
// `target` while the total mass after it is below eps. Requires
// 0 < eps < 1/2 and target >= 2 eps; throws DomainError otherwise.
GapWitness gap_characterization(const ProbVector& p, double eps,
                                double target);

struct CriticalSamples {
  std::uint64_t n_obs = 0;
  std::uint64_t n_miss = 0;
  // True when the threshold was not met before log(e d / (eps n)) turns
  // nonpositive; n_miss is then the last n with a positive denominator.
  bool n_miss_at_boundary = false;
  double n_dev = 0.0;
  std::uint64_t n_circ = 0;
  std::uint64_t n_exp = 0;
};

inline constexpr std::uint64_t kCriticalSearchCap = std::uint64_t{1} << 40;

// Minimal sample sizes at which the sparsity and missing-mass functionals drop
// below eps. Requires 0 < eps < 1 and 0 < delta < 1. Throws CapExceededError
// when a threshold is not reached by `cap`.
CriticalSamples critical_samples(const ProbVector& p, double eps, double delta,
                                 std::uint64_t cap = kCriticalSearchCap);

// Smallest integer n in [1, cap] with pred(n) true, for a predicate that is
// monotone (false then true). Returns nullopt when pred(cap) is false.
template <typename Pred>
std::optional<std::uint64_t> first_satisfying(Pred pred, std::uint64_t cap) {
  std::uint64_t hi = 1;
  while (!pred(hi)) {
    if (hi >= cap) return std::nullopt;
    hi = (hi > cap / 2) ? cap : hi * 2;
  }
  std::uint64_t lo = hi / 2;  // pred(lo) is false, or lo == 0.
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace kldist

#endif  // KLDIST_DISTRIBUTION_HPP_
