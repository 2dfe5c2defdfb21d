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

// Estimation rules mapping class counts to a distribution.
//
// Every rule other than the empirical frequencies is an add-lambda rule
//   p_j = (N_j + lambda) / (n + lambda d)
// with a smoothing level lambda that may depend on the number of distinct
// observed classes D_n and on a target failure probability delta.

#ifndef KLDIST_ESTIMATORS_HPP_
#define KLDIST_ESTIMATORS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kldist/distribution.hpp"
#include "kldist/numerics.hpp"

namespace kldist {

// Per-class occurrence counts N_j of a sample of size n = sum_j N_j.
class CountVector {
 public:
  // Throws ValidationError when fewer than 2 classes are given.
  explicit CountVector(std::vector<std::uint64_t> counts);

  std::size_t size() const { return counts_.size(); }
  std::uint64_t operator[](std::size_t j) const { return counts_[j]; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::uint64_t n() const { return n_; }
  // D_n: number of classes with N_j >= 1.
  std::size_t distinct() const;

  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

namespace spec {
struct Mle {
  friend bool operator==(Mle, Mle) = default;
};
struct AddConstant {
  double lambda = 1.0;
  friend bool operator==(AddConstant, AddConstant) = default;
};
struct Laplace {
  friend bool operator==(Laplace, Laplace) = default;
};
struct KrichevskyTrofimov {
  friend bool operator==(KrichevskyTrofimov, KrichevskyTrofimov) = default;
};
struct ConfDependent {
  double delta = 0.05;
  friend bool operator==(ConfDependent, ConfDependent) = default;
};
struct Adaptive {
  friend bool operator==(Adaptive, Adaptive) = default;
};
struct AdaptiveConf {
  double delta = 0.05;
  friend bool operator==(AdaptiveConf, AdaptiveConf) = default;
};
}  // namespace spec

using EstimatorSpec =
    std::variant<spec::Mle, spec::AddConstant, spec::Laplace,
                 spec::KrichevskyTrofimov, spec::ConfDependent, spec::Adaptive,
                 spec::AdaptiveConf>;

// Checks lambda > 0 and delta in (0, 1). Throws ValidationError.
void validate(const EstimatorSpec& spec);

// Parses `mle`, `laplace`, `kt`, `add:<lambda>`, `conf:<delta>`, `adaptive`
// or `adaptive-conf:<delta>`. Throws ValidationError.
EstimatorSpec parse_estimator_spec(std::string_view text);
// Inverse of parse_estimator_spec; numbers use 17 significant digits so that
// the round trip is exact.
std::string format_estimator_spec(const EstimatorSpec& spec);

bool is_smoothing(const EstimatorSpec& spec);

// Smoothing level lambda for a sample with `distinct` observed classes among
// d. Throws NotApplicableError for Mle and ValidationError when an adaptive
// rule sees distinct == 0 or distinct > d.
double smoothing_level(const EstimatorSpec& spec, std::size_t distinct,
                       std::size_t d);

// Smallest lambda the rule can produce for samples of any size over d
// classes; used for deterministic risk envelopes. Throws NotApplicableError
// for Mle.
double min_smoothing_level(const EstimatorSpec& spec, std::size_t d);

// (N_j + lambda) / (n + lambda d). Requires lambda > 0.
ProbVector add_lambda_estimate(const CountVector& counts, double lambda);

// Applies `spec` to the counts. Throws ValidationError when n == 0.
ProbVector estimate(const EstimatorSpec& spec, const CountVector& counts);

// A generic estimator, for rules outside EstimatorSpec.
using EstimatorFn = std::function<ProbVector(const CountVector&)>;
EstimatorFn as_function(const EstimatorSpec& spec);

// Right-hand side terms of the deterministic risk decomposition of an
// add-lambda estimate:
//   KL(P, p_hat) <= 6 H + 7 lambda d / n + R.
struct RiskDecomposition {
  // H = sum_j (sqrt(N_j/n) - sqrt(p_j))^2.
  double hellinger_term = 0.0;
  // 7 lambda d / n.
  double bias_term = 0.0;
  // R = sum over p_j >= 4 lambda / n with N_j <= n p_j / 4 of
  // p_j log(2 n p_j / lambda).
  ExtendedReal residual_term;
  double lambda_used = 0.0;

  ExtendedReal total() const {
    return ExtendedReal(6.0 * hellinger_term + bias_term) + residual_term;
  }
};

// Throws DomainError unless 0 < lambda <= n / d, and ShapeError on a
// dimension mismatch.
RiskDecomposition risk_decomposition(const ProbVector& p,
                                     const CountVector& counts, double lambda);

}  // namespace kldist

#endif  // KLDIST_ESTIMATORS_HPP_
