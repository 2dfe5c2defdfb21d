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

// Scalar divergence kernels shared by every other module.
//
// All logarithms are natural. The conventions for boundary values follow the
// usual information-theoretic ones: 0 log(0/q) = 0 and p log(p/0) = +inf for
// p > 0. Infinity is carried explicitly by ExtendedReal instead of being
// saturated to a large finite number.

#ifndef KLDIST_NUMERICS_HPP_
#define KLDIST_NUMERICS_HPP_

#include <compare>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace kldist {

// A real number or +infinity. Ordered so that +infinity is above every finite
// value; NaN is never produced.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double value) : value_(value) {}  // NOLINT

  static constexpr ExtendedReal Infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_infinite() const {
    return value_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const { return !is_infinite(); }

  // The stored value; +inf for the infinite marker.
  constexpr double value() const { return value_; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }
  ExtendedReal& operator+=(ExtendedReal other) {
    value_ += other.value_;
    return *this;
  }
  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
};

// Neumaier-compensated running sum; used wherever millions of small terms are
// accumulated and compared to closed forms at 1e-12 relative precision.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// x log x with the value 0 at x = 0.
double xlogx(double x);

// h(t) = t log t - t + 1, with h(0) = 1. Throws DomainError for t < 0.
double entropy_h(double t);

// D(u, v) = u log(u/v) - u + v = v h(u/v). D(0, v) = v and D(u, 0) = +inf for
// u > 0. Throws DomainError for negative arguments.
ExtendedReal kl_term(double u, double v);

// Sum over coordinates of D(p_j, q_j). For normalized inputs this is the
// relative entropy KL(P || Q). Throws ShapeError on dimension mismatch.
ExtendedReal kl_divergence(std::span<const double> p, std::span<const double> q);

// Squared Hellinger distance without the 1/2 factor: sum (sqrt p - sqrt q)^2.
double hellinger_sq(std::span<const double> p, std::span<const double> q);

// exp(-D(mu, lambda)): the Chernoff bound on P(N >= mu) for mu >= lambda and
// on P(N <= mu) for mu <= lambda, where N ~ Poisson(lambda).
double poisson_chernoff_tail(double mu, double lambda);

// phi(C) = h(C) / (sqrt C - 1)^2, continuously extended with phi(1) = 2 and
// phi(0) = 1. Nondecreasing on [0, inf). Throws DomainError for C < 0.
double kl_hellinger_ratio_phi(double c);

// Parses a real number written either as a decimal literal ("0.01", "1e-5",
// "inf") or as a power of e ("e^-17"). Throws ValidationError.
double parse_real(std::string_view text);

// Formats with 12 significant digits; infinity prints as "inf".
std::string format_real(double x);

}  // namespace kldist

#endif  // KLDIST_NUMERICS_HPP_
