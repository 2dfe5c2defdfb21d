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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kldist/errors.hpp"

namespace kldist {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Two-point vector (1 - rho) on class 0 and rho on class j, built without a
// normalization pass so that the class-0 entry is exactly 1 - rho.
ProbVector TwoPoint(std::size_t d, std::size_t j, double rho) {
  std::vector<double> p(d, 0.0);
  p[0] = 1.0 - rho;
  p[j] += rho;
  return ProbVector::FromProbabilities(std::move(p));
}

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
}

}  // namespace

double mixing_weight(std::uint64_t n, double delta) {
  CheckDelta(delta);
  if (n == 0) throw ValidationError("mixing_weight: n must be >= 1");
  return -std::expm1(std::log(delta) / static_cast<double>(n));
}

TwoPointFamily two_point_family(std::uint64_t n, std::size_t d, double delta) {
  if (d < 2) throw ValidationError("two_point_family: d must be >= 2");
  TwoPointFamily out;
  const double nn = static_cast<double>(n);
  if (!(nn >= static_cast<double>(d))) {
    out.warnings.push_back("outside validity range: n >= d");
  }
  if (!(delta > std::exp(-nn) && delta < std::exp(-1.0))) {
    out.warnings.push_back("outside validity range: delta in (e^{-n}, e^{-1})");
  }
  const double rho = mixing_weight(n, delta);
  out.members.push_back(dirac(d, 0));
  for (std::size_t j = 1; j < d; ++j) out.members.push_back(TwoPoint(d, j, rho));
  return out;
}

ProbVector conf_indep_adversary(std::uint64_t n, double delta, std::size_t j,
                                std::size_t d) {
  if (d < 2 || j >= d) {
    throw ValidationError("conf_indep_adversary: need j < d");
  }
  if (j == 0) {
    CheckDelta(delta);
    return dirac(d, 0);
  }
  return TwoPoint(d, j, mixing_weight(n, delta));
}

ProbVector sparse_support_instance(std::uint64_t n, std::size_t d,
                                   std::size_t s,
                                   std::span<const std::size_t> sigma) {
  if (n == 0 || s < 1 || s > d || s > n) {
    throw ValidationError("sparse_support_instance: need 1 <= s <= min(n, d)");
  }
  if (sigma.size() != s - 1) {
    throw ValidationError("sparse_support_instance: |sigma| must be s - 1");
  }
  std::vector<std::size_t> sorted(sigma.begin(), sigma.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("sparse_support_instance: repeated label in sigma");
  }
  if (!sorted.empty() && (sorted.front() < 1 || sorted.back() >= d)) {
    throw ValidationError("sparse_support_instance: labels must lie in [1, d)");
  }
  const double small = 1.0 / (2.0 * std::numbers::e * static_cast<double>(n));
  std::vector<double> p(d, 0.0);
  p[0] = 1.0 - static_cast<double>(s - 1) * small;
  for (std::size_t j : sorted) p[j] = small;
  return ProbVector::FromProbabilities(std::move(p));
}

std::vector<std::size_t> random_support(std::size_t d, std::size_t s,
                                        PhiloxRng& rng) {
  if (s < 1 || s > d) throw ValidationError("random_support: need 1 <= s <= d");
  std::vector<std::size_t> labels(d - 1);
  std::iota(labels.begin(), labels.end(), std::size_t{1});
  for (std::size_t i = 0; i + 1 < s; ++i) {
    // Unbiased index in [i, d-1) by 128-bit multiply-shift with rejection.
    const std::uint64_t range = labels.size() - i;
    __extension__ typedef unsigned __int128 Wide;
    std::uint64_t pick;
    const std::uint64_t limit = -range % range;
    while (true) {
      const Wide m = static_cast<Wide>(rng()) * range;
      if (static_cast<std::uint64_t>(m) >= limit) {
        pick = static_cast<std::uint64_t>(m >> 64);
        break;
      }
    }
    std::swap(labels[i], labels[i + pick]);
  }
  labels.resize(s - 1);
  return labels;
}

ProbVector shape_family(const ShapeKind& kind, std::size_t d) {
  if (d < 2) throw ValidationError("shape_family: d must be >= 2");
  std::vector<double> w(d, 0.0);
  std::visit(
      Overloaded{
          [&](const shape::Polynomial& k) {
            if (!(k.alpha > 1.0)) {
              throw ValidationError("polynomial: alpha must be > 1");
            }
            for (std::size_t j = 0; j < d; ++j) {
              w[j] = std::pow(static_cast<double>(j + 1), -k.alpha);
            }
          },
          [&](const shape::Geometric& k) {
            if (!(k.rate > 0.0) || !std::isfinite(k.rate)) {
              throw ValidationError("geometric: rate must be > 0");
            }
            // Shifted by one step so that class 0 has weight 1.
            for (std::size_t j = 0; j < d; ++j) {
              w[j] = std::exp(-k.rate * static_cast<double>(j));
            }
          },
          [&](const shape::SparseUniform& k) {
            if (k.s < 1 || k.s > d) {
              throw ValidationError("sparse-uniform: need 1 <= s <= d");
            }
            if (!(k.c > 0.0 && k.c <= 1.0)) {
              throw ValidationError("sparse-uniform: c must lie in (0, 1]");
            }
            const double low = k.c / static_cast<double>(k.s);
            for (std::size_t j = 1; j < k.s; ++j) w[j] = low;
            w[0] = 1.0 - static_cast<double>(k.s - 1) * low;
          },
          [&](const shape::HalfUniformGeometric&) {
            const std::size_t half = d / 2;
            for (std::size_t j = 0; j < d; ++j) {
              w[j] = j < half ? 1.0
                              : std::ldexp(1.0, -static_cast<int>(j + 1 - half));
            }
          },
          [&](const shape::Uniform&) { std::fill(w.begin(), w.end(), 1.0); },
      },
      kind);
  return make_prob_vector(w);
}

}  // namespace kldist
