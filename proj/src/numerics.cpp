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

#include "kldist/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "kldist/errors.hpp"

namespace kldist {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double xlogx(double x) {
  if (x == 0.0) return 0.0;
  return x * std::log(x);
}

double entropy_h(double t) {
  if (!(t >= 0.0)) {
    throw DomainError("entropy_h: argument must be nonnegative, got " +
                      std::to_string(t));
  }
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return t;
  const double x = t - 1.0;
  if (t < 0.5 || t > 2.0) return std::max(0.0, t * std::log(t) - x);
  // Near the minimum h(1 + x) ~ x^2 / 2; log1p keeps the relative precision.
  return std::max(0.0, t * std::log1p(x) - x);
}

ExtendedReal kl_term(double u, double v) {
  if (!(u >= 0.0) || !(v >= 0.0)) {
    throw DomainError("kl_term: arguments must be nonnegative");
  }
  if (u == 0.0) return ExtendedReal(v);
  if (v == 0.0) return ExtendedReal::Infinity();
  const double ratio = u / v;
  if (std::isfinite(ratio) && ratio > 0.0) {
    return ExtendedReal(v * entropy_h(ratio));
  }
  // u/v over- or underflows: fall back to the logarithmic form.
  return ExtendedReal(
      std::max(0.0, u * (std::log(u) - std::log(v)) - u + v));
}

ExtendedReal kl_divergence(std::span<const double> p,
                           std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("kl_divergence: dimension mismatch (" +
                     std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()) + ")");
  }
  CompensatedSum total;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const ExtendedReal term = kl_term(p[j], q[j]);
    if (term.is_infinite()) return ExtendedReal::Infinity();
    total.add(term.value());
  }
  return ExtendedReal(total.value());
}

double hellinger_sq(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("hellinger_sq: dimension mismatch (" +
                     std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()) + ")");
  }
  CompensatedSum total;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double root_sum = std::sqrt(p[j]) + std::sqrt(q[j]);
    if (root_sum == 0.0) continue;
    // sqrt p - sqrt q = (p - q) / (sqrt p + sqrt q), free of cancellation.
    const double diff = (p[j] - q[j]) / root_sum;
    total.add(diff * diff);
  }
  return total.value();
}

double poisson_chernoff_tail(double mu, double lambda) {
  const ExtendedReal d = kl_term(mu, lambda);
  if (d.is_infinite()) return 0.0;
  return std::exp(-d.value());
}

double kl_hellinger_ratio_phi(double c) {
  if (!(c >= 0.0)) {
    throw DomainError("kl_hellinger_ratio_phi: argument must be nonnegative");
  }
  if (c == 0.0) return 1.0;
  const double x = std::sqrt(c) - 1.0;
  // Removable singularity at c = 1: phi((1 + x)^2) = 2 + 2x/3 + O(x^2).
  if (std::abs(x) < 1e-6) return 2.0 + 2.0 * x / 3.0;
  return entropy_h(c) / (x * x);
}

double parse_real(std::string_view text) {
  std::string_view body = text;
  bool power_of_e = false;
  if (body.size() > 2 && body.substr(0, 2) == "e^") {
    power_of_e = true;
    body.remove_prefix(2);
  }
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size() ||
      std::isnan(value)) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return power_of_e ? std::exp(value) : value;
}

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace kldist
