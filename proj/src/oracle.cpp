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

#include "kldist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kldist/errors.hpp"
#include "kldist/sampling.hpp"

namespace kldist {
namespace {

struct Enumerator {
  const ProbVector& p;
  const CountVisitor& visit;
  std::vector<double> log_p;
  std::vector<std::uint64_t> counts;
  double log_n_factorial = 0.0;

  // Assigns class j given `remaining` draws left and the log-probability
  // accumulated so far (-inf once a zero-probability class is hit).
  void Recurse(std::size_t j, std::uint64_t remaining, double log_prob) {
    const std::size_t last = counts.size() - 1;
    if (j == last) {
      counts[j] = remaining;
      Emit(log_prob + Term(j, remaining));
      return;
    }
    for (std::uint64_t c = remaining + 1; c-- > 0;) {
      counts[j] = c;
      Recurse(j + 1, remaining - c, log_prob + Term(j, c));
    }
  }

  double Term(std::size_t j, std::uint64_t c) const {
    if (c == 0) return 0.0;
    return static_cast<double>(c) * log_p[j] - log_factorial(c);
  }

  void Emit(double log_prob) {
    const double prob = std::isinf(log_prob) ? 0.0 : std::exp(log_n_factorial + log_prob);
    visit(CountVector(counts), prob);
  }
};

}  // namespace

double composition_count(std::uint64_t n, std::size_t d) {
  if (d == 0) return n == 0 ? 1.0 : 0.0;
  __extension__ typedef unsigned __int128 Wide;
  // C(n + k, k) built up as C(n + i, i) = C(n + i - 1, i - 1) (n + i) / i.
  Wide c = 1;
  const std::uint64_t k = d - 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return static_cast<double>(static_cast<std::uint64_t>(c));
}

void for_each_count_vector(const ProbVector& p, std::uint64_t n,
                           const CountVisitor& visit, double cap) {
  const double total = composition_count(n, p.size());
  if (total > cap) {
    throw CapExceededError("oracle: " + format_real(total) +
                               " count vectors exceed the cap of " +
                               format_real(cap),
                           total, cap);
  }
  Enumerator e{p, visit, {}, std::vector<std::uint64_t>(p.size(), 0),
               log_factorial(n)};
  e.log_p.reserve(p.size());
  for (double pj : p) e.log_p.push_back(pj > 0.0 ? std::log(pj) : -INFINITY);
  e.Recurse(0, n, 0.0);
}

ExactDistribution::ExactDistribution(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(a.probability >= 0.0)) {
      throw ValidationError("ExactDistribution: negative probability");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && atoms_.back().value == a.value) {
      atoms_.back().probability += a.probability;
    } else {
      atoms_.push_back(a);
    }
  }
}

double ExactDistribution::total_probability() const {
  CompensatedSum s;
  for (const Atom& a : atoms_) s.add(a.probability);
  return s.value();
}

ExtendedReal ExactDistribution::expectation() const {
  CompensatedSum s;
  for (const Atom& a : atoms_) {
    if (a.probability <= 0.0) continue;
    if (a.value.is_infinite()) return ExtendedReal::Infinity();
    s.add(a.probability * a.value.value());
  }
  return ExtendedReal(s.value());
}

double ExactDistribution::tail(ExtendedReal t) const {
  CompensatedSum s;
  for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->value >= t; ++it) {
    s.add(it->probability);
  }
  return s.value();
}

ExtendedReal ExactDistribution::quantile(double q) const {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("ExactDistribution::quantile: q must lie in (0, 1]");
  }
  if (atoms_.empty()) throw DomainError("ExactDistribution: no atoms");
  CompensatedSum cumulative;
  for (const Atom& a : atoms_) {
    cumulative.add(a.probability);
    if (a.probability > 0.0 && cumulative.value() >= q) return a.value;
  }
  // Rounding left the total below q: return the largest charged atom.
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->probability > 0.0) return it->value;
  }
  return atoms_.back().value;
}

std::string ExactDistribution::to_csv() const {
  std::string out = "value,probability\n";
  for (const Atom& a : atoms_) {
    out += format_real(a.value.value());
    out += ',';
    out += format_real(a.probability);
    out += '\n';
  }
  return out;
}

ExactDistribution exact_statistic_distribution(const ProbVector& p,
                                               std::uint64_t n,
                                               const CountStatistic& statistic,
                                               double cap) {
  std::vector<ExactDistribution::Atom> atoms;
  for_each_count_vector(
      p, n,
      [&](const CountVector& counts, double prob) {
        if (prob > 0.0) atoms.push_back({statistic(counts), prob});
      },
      cap);
  return ExactDistribution(std::move(atoms));
}

ExactFunctionals exact_functionals(const ProbVector& p, std::uint64_t n,
                                   const EstimatorSpec& spec, double cap) {
  if (n == 0) throw ValidationError("exact_functionals: n must be >= 1");
  validate(spec);
  std::vector<ExactDistribution::Atom> atoms;
  CompensatedSum missing;
  CompensatedSum distinct;
  CompensatedSum total;
  for_each_count_vector(
      p, n,
      [&](const CountVector& counts, double prob) {
        total.add(prob);
        if (prob <= 0.0) return;
        atoms.push_back({kl_divergence(p, estimate(spec, counts)), prob});
        CompensatedSum m;
        for (std::size_t j = 0; j < p.size(); ++j) {
          if (counts[j] == 0) m.add(p[j]);
        }
        missing.add(prob * m.value());
        distinct.add(prob * static_cast<double>(counts.distinct()));
      },
      cap);
  ExactFunctionals out;
  out.risk_distribution = ExactDistribution(std::move(atoms));
  out.expected_kl = out.risk_distribution.expectation();
  out.expected_missing = missing.value();
  out.expected_distinct = distinct.value();
  out.total_probability = total.value();
  return out;
}

}  // namespace kldist
