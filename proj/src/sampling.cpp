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

#include "kldist/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kldist/errors.hpp"
#include "kldist/numerics.hpp"

namespace kldist {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr std::size_t kLogFactorialTableSize = 256;

const std::array<double, kLogFactorialTableSize>& LogFactorialTable() {
  static const std::array<double, kLogFactorialTableSize> table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    CompensatedSum acc;
    for (std::size_t k = 1; k < t.size(); ++k) {
      acc.add(std::log(static_cast<double>(k)));
      t[k] = acc.value();
    }
    return t;
  }();
  return table;
}

// Poisson sampling by sequential search of the CDF; fine for small means.
std::uint64_t PoissonInversion(double mean, PhiloxRng& rng) {
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann's PTRS transformed rejection with squeeze, for mean >= 10.
std::uint64_t PoissonPtrs(double mean, PhiloxRng& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::uint64_t>(kd);
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - log_factorial(k)) {
      return k;
    }
  }
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

PhiloxRng::PhiloxRng(RngSeed seed)
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      stream_(seed.stream_index) {}

void PhiloxRng::Refill() {
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block_),
       static_cast<std::uint32_t>(block_ >> 32),
       static_cast<std::uint32_t>(stream_),
       static_cast<std::uint32_t>(stream_ >> 32)},
      key_);
  ++block_;
  buffer_[0] = out[0] | (std::uint64_t{out[1]} << 32);
  buffer_[1] = out[2] | (std::uint64_t{out[3]} << 32);
  available_ = 2;
}

PhiloxRng::result_type PhiloxRng::operator()() {
  if (available_ == 0) Refill();
  return buffer_[2 - available_--];
}

double PhiloxRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double PhiloxRng::uniform_open() {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

CategoricalSampler::CategoricalSampler(const ProbVector& p)
    : threshold_(p.size(), 0), alias_(p.size(), 0) {
  const std::size_t d = p.size();
  std::vector<double> scaled(d);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  std::size_t heaviest = 0;
  for (std::size_t j = 0; j < d; ++j) {
    scaled[j] = p[j] * static_cast<double>(d);
    (scaled[j] < 1.0 ? small : large).push_back(j);
    if (p[j] > p[heaviest]) heaviest = j;
  }
  auto set_column = [&](std::size_t j, double q, std::size_t alias) {
    threshold_[j] = q >= 1.0 ? std::numeric_limits<std::uint64_t>::max()
                             : static_cast<std::uint64_t>(q * 0x1.0p64);
    alias_[j] = alias;
  };
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    set_column(s, scaled[s], l);
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are full columns up to rounding. A zero-probability class must
  // still never be returned, so it defers entirely to the heaviest class.
  for (std::size_t j : large) set_column(j, 1.0, j);
  for (std::size_t j : small) {
    if (p[j] > 0.0) {
      set_column(j, 1.0, j);
    } else {
      set_column(j, 0.0, heaviest);
    }
  }
}

double log_factorial(std::uint64_t k) {
  if (k < kLogFactorialTableSize) return LogFactorialTable()[k];
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x + 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

std::uint64_t draw_poisson(double mean, PhiloxRng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("draw_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  return mean < 10.0 ? PoissonInversion(mean, rng) : PoissonPtrs(mean, rng);
}

CountVector draw_counts(const CategoricalSampler& sampler, std::uint64_t n,
                        PhiloxRng& rng) {
  std::vector<std::uint64_t> counts(sampler.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++counts[sampler(rng)];
  return CountVector(std::move(counts));
}

CountVector draw_counts(const ProbVector& p, std::uint64_t n, RngSeed seed) {
  PhiloxRng rng(seed);
  return draw_counts(CategoricalSampler(p), n, rng);
}

std::vector<std::uint64_t> draw_poissonized_counts(const ProbVector& p,
                                                   std::uint64_t n,
                                                   RngSeed seed) {
  PhiloxRng rng(seed);
  std::vector<std::uint64_t> out(p.size());
  const double half = static_cast<double>(n) / 2.0;
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = draw_poisson(half * p[j], rng);
  return out;
}

CoupledPoissonSample draw_coupled_poissonized(const ProbVector& p,
                                              std::uint64_t n, RngSeed seed) {
  PhiloxRng rng(seed);
  const std::uint64_t size = draw_poisson(static_cast<double>(n) / 2.0, rng);
  const CategoricalSampler sampler(p);
  std::vector<std::uint64_t> first_n(p.size(), 0);
  std::vector<std::uint64_t> first_size(p.size(), 0);
  const std::uint64_t total = std::max(n, size);
  for (std::uint64_t i = 0; i < total; ++i) {
    const std::size_t j = sampler(rng);
    if (i < n) ++first_n[j];
    if (i < size) ++first_size[j];
  }
  return {CountVector(std::move(first_n)), std::move(first_size), size};
}

SampleSummary summarize(const ProbVector& p, const CountVector& counts) {
  if (p.size() != counts.size()) {
    throw ShapeError("summarize: dimension mismatch");
  }
  const double n = static_cast<double>(counts.n());
  CompensatedSum missing;
  CompensatedSum under;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double nj = static_cast<double>(counts[j]);
    if (counts[j] == 0) missing.add(p[j]);
    if (nj <= n * p[j] / 4.0) under.add(p[j]);
  }
  SampleSummary out{counts, counts.distinct(), missing.value(), under.value()};
  return out;
}

DiscreteLaw::DiscreteLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw ValidationError("DiscreteLaw: empty pmf");
  CompensatedSum total;
  for (double w : pmf_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("DiscreteLaw: weights must be finite and >= 0");
    }
    total.add(w);
  }
  if (!(total.value() > 0.0)) throw ValidationError("DiscreteLaw: zero mass");
  cdf_.resize(pmf_.size());
  CompensatedSum running;
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    pmf_[k] /= total.value();
    running.add(pmf_[k]);
    cdf_[k] = std::min(1.0, running.value());
  }
  cdf_.back() = 1.0;
  survival_.assign(pmf_.size() + 1, 0.0);
  CompensatedSum upper;
  for (std::size_t k = pmf_.size(); k-- > 0;) {
    upper.add(pmf_[k]);
    survival_[k] = std::min(1.0, upper.value());
  }
  survival_[0] = 1.0;
}

DiscreteLaw DiscreteLaw::Binomial(std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("DiscreteLaw::Binomial: p must lie in [0, 1]");
  }
  std::vector<double> pmf(trials + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
  } else if (p == 1.0) {
    pmf[trials] = 1.0;
  } else {
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::uint64_t k = 0; k <= trials; ++k) {
      pmf[k] = std::exp(log_factorial(trials) - log_factorial(k) -
                        log_factorial(trials - k) +
                        static_cast<double>(k) * lp +
                        static_cast<double>(trials - k) * lq);
    }
  }
  return DiscreteLaw(std::move(pmf));
}

DiscreteLaw DiscreteLaw::Poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ValidationError("DiscreteLaw::Poisson: mean must be finite, >= 0");
  }
  std::vector<double> pmf;
  CompensatedSum cdf;
  const double log_mean = std::log(mean);
  for (std::uint64_t k = 0;; ++k) {
    const double x = mean == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                 : std::exp(static_cast<double>(k) * log_mean -
                                            mean - log_factorial(k));
    pmf.push_back(x);
    cdf.add(x);
    // Past the mode the terms decay geometrically; stop once they no longer
    // move the total.
    if (static_cast<double>(k) > mean && x <= 1e-18 * cdf.value()) break;
  }
  return DiscreteLaw(std::move(pmf));
}

std::uint64_t DiscreteLaw::quantile(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint64_t>(
      std::min<std::ptrdiff_t>(it - cdf_.begin(),
                               static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

double DiscreteLaw::tail(std::uint64_t t) const {
  if (t >= pmf_.size()) return 0.0;
  return survival_[t];
}

bool stochastically_dominated(const DiscreteLaw& x, const DiscreteLaw& y,
                              double tol) {
  const std::size_t top = std::max(x.pmf().size(), y.pmf().size());
  for (std::uint64_t t = 0; t <= top; ++t) {
    if (x.tail(t) > y.tail(t) + tol) return false;
  }
  return true;
}

std::array<std::uint64_t, 2> coupled_sums(std::span<const DiscreteLaw> xs,
                                          std::span<const DiscreteLaw> ys,
                                          PhiloxRng& rng) {
  if (xs.size() != ys.size()) {
    throw ShapeError("coupled_sums: the two lists differ in length");
  }
  std::array<std::uint64_t, 2> sums{0, 0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = rng.uniform_open();
    sums[0] += xs[i].quantile(u);
    sums[1] += ys[i].quantile(u);
  }
  return sums;
}

}  // namespace kldist
