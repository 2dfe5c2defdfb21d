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

// Hard instances for KL estimation and stylized distribution families.
//
// Class 0 plays the role of the heavy class in every construction; the
// remaining labels 1, ..., d-1 carry the perturbations.

#ifndef KLDIST_ADVERSARIAL_HPP_
#define KLDIST_ADVERSARIAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kldist/distribution.hpp"
#include "kldist/sampling.hpp"

namespace kldist {

struct TwoPointFamily {
  // members[0] is the Dirac mass at class 0; members[j] for j >= 1 puts
  // delta^{1/n} on class 0 and 1 - delta^{1/n} on class j.
  std::vector<ProbVector> members;
  std::vector<std::string> warnings;
};

// The d-member family on which every estimator has KL risk of order
// log(d) log(1/delta) / n with probability delta. Ranges n >= d >= 2 and
// e^{-n} < delta < e^{-1} are reported as warnings.
TwoPointFamily two_point_family(std::uint64_t n, std::size_t d, double delta);

// rho = 1 - delta^{1/n}, computed as -expm1(log(delta) / n).
double mixing_weight(std::uint64_t n, double delta);

// (1 - rho) delta_0 + rho delta_j with rho = mixing_weight(n, delta), so that
// an all-class-0 sample has probability exactly delta. For j = 0 the mixture
// degenerates to delta_0. Requires j < d and 0 < delta < 1; throws
// ValidationError.
ProbVector conf_indep_adversary(std::uint64_t n, double delta, std::size_t j,
                                std::size_t d);

// Class 0 gets 1 - (s-1)/(2 e n) and each label in `sigma` gets 1/(2 e n).
// Requires 1 <= s <= min(n, d), |sigma| = s - 1 and distinct labels in
// [1, d-1]; throws ValidationError.
ProbVector sparse_support_instance(std::uint64_t n, std::size_t d,
                                   std::size_t s,
                                   std::span<const std::size_t> sigma);

// A uniformly random (s-1)-subset of {1, ..., d-1}, by partial Fisher-Yates.
std::vector<std::size_t> random_support(std::size_t d, std::size_t s,
                                        PhiloxRng& rng);

namespace shape {
// p_j proportional to j^{-alpha}, j = 1..d.
struct Polynomial {
  double alpha = 2.0;
};
// p_j proportional to e^{-rate j}, j = 1..d.
struct Geometric {
  double rate = 1.0;
};
// Support of size s with p_j >= c/s: classes 1..s-1 get c/s and class 0 the
// remaining mass. c = 1 is uniform on s classes.
struct SparseUniform {
  std::size_t s = 1;
  double c = 1.0;
};
// Weight 1 on the first d/2 classes and 2^{-(j - d/2)} on class j > d/2
// (1-based), normalized.
struct HalfUniformGeometric {};
struct Uniform {};
}  // namespace shape

using ShapeKind = std::variant<shape::Polynomial, shape::Geometric,
                               shape::SparseUniform, shape::HalfUniformGeometric,
                               shape::Uniform>;

// Throws ValidationError for alpha <= 1, rate <= 0, s outside [1, d] or c
// outside (0, 1].
ProbVector shape_family(const ShapeKind& kind, std::size_t d);

}  // namespace kldist

#endif  // KLDIST_ADVERSARIAL_HPP_
