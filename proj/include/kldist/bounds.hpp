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

// Registry of closed-form risk and mass bounds.
//
// Each entry evaluates the right-hand side of one published inequality with
// its numerical constants kept as printed. Throughout, L = log(1/delta).
//
//   expectation_laplace  log(1 + (d-1)/(n+1))
//   expectation_adaptive (2.4 s_n + 2 s° log(e d / s°)) / (n+1), s° at n/2
//   laplace_whp          110000 (d + L log L) / n
//   conf_whp             110000 (d + log(d) L) / n
//   adaptive_whp         121000 (s_n + s° log(e d/s_n) + max(log d, log L) L) / n
//   adaptive_conf_whp    121000 (s_n + s° log(e d/s_n) + log(d) L) / n
//   missing_mass_whp     (336 s° + 2500 e L) / n, s° at n/112
//   conf_indep_lower     (d + L log L) / (5000 n)
//   minimax_lower        (d + log(d) L) / (5000 n)
//   conf_indep_lemma     L log L / (10 n)
//   two_point_lemma      log(d) L / (14 n)
//   sparse_lower         s log(e d / s) / (300 n)
//   sparse_tail_lower    (s log(e d / s) + log(d) L) / (320 n)
//   mcallester_ortiz     E[M_n] + sqrt(L / n)
//   benhamou             E[M_n] + sqrt(2 d_n^+ L) / n + L / n
//   types_reverse_kl     (d log(n+1) + L) / n
//   agrawal_reverse_kl   (6 d + 6 L) / n
//   hellinger_whp        (4 s_n + 7 L) / n
//
// For adaptive_whp and adaptive_conf_whp the symbol s_circ is s° at n/112.

#ifndef KLDIST_BOUNDS_HPP_
#define KLDIST_BOUNDS_HPP_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kldist {

enum class BoundId {
  kExpectationLaplace,
  kExpectationAdaptive,
  kLaplaceWhp,
  kConfWhp,
  kAdaptiveWhp,
  kAdaptiveConfWhp,
  kMissingMassWhp,
  kConfIndepLower,
  kMinimaxLower,
  kConfIndepLemma,
  kTwoPointLemma,
  kSparseLower,
  kSparseTailLower,
  kMcallesterOrtiz,
  kBenhamou,
  kTypesReverseKl,
  kAgrawalReverseKl,
  kHellingerWhp,
};

enum class BoundKind {
  // Bounds E[statistic].
  kExpectation,
  // P(statistic >= rhs) <= m delta.
  kUpperTail,
  // Some distribution has P(KL >= rhs) >= delta (or more); not checkable on a
  // single fixed distribution.
  kLowerTail,
};

// The random quantity a bound controls.
enum class Statistic {
  kKlRisk,              // KL(P, estimate)
  kMissingMass,         // M_n
  kUnderestimatedMass,  // U_n
  kReverseKl,           // KL(empirical, P)
  kEmpiricalHellinger,  // sum_j (sqrt(N_j/n) - sqrt(p_j))^2
};

struct BoundInfo {
  BoundId id;
  std::string_view name;
  BoundKind kind;
  Statistic statistic;
  // m in "probability at most m delta"; 0 for expectation bounds.
  double failure_multiplier;
  std::vector<std::string_view> symbols;
  std::vector<std::string_view> optional_symbols;
  // The sample-size fraction at which s_circ is evaluated, or 0 when the
  // formula does not use s_circ.
  double s_circ_scale;
  // Estimator text form the bound is stated for (empty when the bound does
  // not concern an estimator). "conf" and "adaptive-conf" match any delta.
  std::string_view estimator;
};

using BoundParams = std::map<std::string, double, std::less<>>;

struct BoundValue {
  double value = 0.0;
  // One message per violated validity condition of the underlying result.
  std::vector<std::string> warnings;
};

std::span<const BoundId> all_bound_ids();
const BoundInfo& bound_info(BoundId id);
std::string_view bound_name(BoundId id);
// Throws ValidationError for an unknown name.
BoundId parse_bound_id(std::string_view name);

std::string_view statistic_name(Statistic s);

// Evaluates the right-hand side. Throws SchemaError when `params` is missing
// a required symbol or has an unknown one, and DomainError for n <= 0,
// d <= 0 or delta outside (0, 1). Inputs outside the range where the
// inequality is proven produce warnings, not errors.
BoundValue bound_value(BoundId id, const BoundParams& params);

}  // namespace kldist

#endif  // KLDIST_BOUNDS_HPP_
