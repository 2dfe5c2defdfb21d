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

// Reproducible sample generation.
//
// Randomness comes from Philox4x32-10 keyed by a 64-bit master seed, with the
// 128-bit counter split into a 64-bit stream index and a 64-bit block counter.
// A (master_seed, stream_index) pair therefore names one independent stream,
// and the sequence it produces depends on nothing else: not on the platform,
// the thread, or other streams. Every sampler below is built only from the
// raw 64-bit outputs and integer or IEEE double arithmetic.

#ifndef KLDIST_SAMPLING_HPP_
#define KLDIST_SAMPLING_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "kldist/distribution.hpp"
#include "kldist/estimators.hpp"

namespace kldist {

// One Philox4x32-10 block: 10 rounds applied to `counter` under `key`.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Counter-based generator; satisfies UniformRandomBitGenerator.
class PhiloxRng {
 public:
  using result_type = std::uint64_t;

  explicit PhiloxRng(RngSeed seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();

 private:
  void Refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

// Walker/Vose alias table over the classes of P. Zero-probability classes are
// never drawn.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const ProbVector& p);

  std::size_t size() const { return threshold_.size(); }

  std::size_t operator()(PhiloxRng& rng) const {
    __extension__ typedef unsigned __int128 Wide;
    const Wide wide = static_cast<Wide>(rng()) * threshold_.size();
    const auto column = static_cast<std::size_t>(wide >> 64);
    const auto fraction = static_cast<std::uint64_t>(wide);
    return fraction < threshold_[column] ? column : alias_[column];
  }

 private:
  // Acceptance threshold scaled to 2^64; a full column stores UINT64_MAX and
  // aliases itself.
  std::vector<std::uint64_t> threshold_;
  std::vector<std::size_t> alias_;
};

// Draws from Poisson(mean): inversion below mean 10, transformed rejection
// (PTRS) above.
std::uint64_t draw_poisson(double mean, PhiloxRng& rng);

// log(k!) from a table for small k and a Stirling series beyond.
double log_factorial(std::uint64_t k);

// Multinomial(n, P) class counts.
CountVector draw_counts(const ProbVector& p, std::uint64_t n, RngSeed seed);
CountVector draw_counts(const CategoricalSampler& sampler, std::uint64_t n,
                        PhiloxRng& rng);

// Independent coordinates N~_j ~ Poisson(n p_j / 2).
std::vector<std::uint64_t> draw_poissonized_counts(const ProbVector& p,
                                                   std::uint64_t n,
                                                   RngSeed seed);

struct CoupledPoissonSample {
  // Counts over the first n draws of the shared i.i.d. stream.
  CountVector counts;
  // Counts over the first `poisson_size` draws of the same stream.
  std::vector<std::uint64_t> poissonized;
  // N ~ Poisson(n/2), independent of the stream.
  std::uint64_t poisson_size = 0;
};

// Shared-stream coupling: on the event N <= n, poissonized[j] <= counts[j]
// for every class.
CoupledPoissonSample draw_coupled_poissonized(const ProbVector& p,
                                              std::uint64_t n, RngSeed seed);

struct SampleSummary {
  CountVector counts;
  std::size_t distinct = 0;
  // M_n = sum_j p_j 1{N_j = 0}.
  double missing_mass = 0.0;
  // U_n = sum_j p_j 1{N_j <= n p_j / 4}.
  double underestimated_mass = 0.0;
};

// Throws ShapeError on a dimension mismatch.
SampleSummary summarize(const ProbVector& p, const CountVector& counts);

// A law on {0, 1, ..., K} given by its probability mass function.
class DiscreteLaw {
 public:
  // Normalizes nonnegative weights; throws ValidationError.
  explicit DiscreteLaw(std::vector<double> pmf);

  static DiscreteLaw Binomial(std::uint64_t trials, double p);
  // Poisson(mean) truncated where the remaining mass is below 1e-16.
  static DiscreteLaw Poisson(double mean);

  std::span<const double> pmf() const { return pmf_; }
  std::span<const double> cdf() const { return cdf_; }
  // Smallest k with cdf(k) >= u.
  std::uint64_t quantile(double u) const;
  // P(X >= t).
  double tail(std::uint64_t t) const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  // survival_[k] = P(X >= k), summed from the top for relative precision.
  std::vector<double> survival_;
};

// X is dominated by Y: P(X >= t) <= P(Y >= t) + tol for every t.
bool stochastically_dominated(const DiscreteLaw& x, const DiscreteLaw& y,
                              double tol = 1e-12);

// Draws (sum_i X_i, sum_i Y_i) with X_i and Y_i built from one shared uniform
// by inverse-CDF coupling, so that X_i <= Y_i whenever X_i is dominated by
// Y_i. Throws ShapeError when the lists differ in length.
std::array<std::uint64_t, 2> coupled_sums(std::span<const DiscreteLaw> xs,
                                          std::span<const DiscreteLaw> ys,
                                          PhiloxRng& rng);

}  // namespace kldist

#endif  // KLDIST_SAMPLING_HPP_
