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

#include "kldist/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kldist/errors.hpp"
#include "kldist/numerics.hpp"

namespace kldist {
namespace {

using K = BoundKind;
using S = Statistic;

const std::vector<BoundInfo>& Registry() {
  static const std::vector<BoundInfo> registry = {
      {BoundId::kExpectationLaplace, "expectation_laplace", K::kExpectation,
       S::kKlRisk, 0, {"n", "d"}, {}, 0, "laplace"},
      {BoundId::kExpectationAdaptive, "expectation_adaptive", K::kExpectation,
       S::kKlRisk, 0, {"n", "d", "s_n", "s_circ"}, {}, 0.5, "adaptive"},
      {BoundId::kLaplaceWhp, "laplace_whp", K::kUpperTail, S::kKlRisk, 4,
       {"n", "d", "delta"}, {}, 0, "laplace"},
      {BoundId::kConfWhp, "conf_whp", K::kUpperTail, S::kKlRisk, 4,
       {"n", "d", "delta"}, {}, 0, "conf"},
      {BoundId::kAdaptiveWhp, "adaptive_whp", K::kUpperTail, S::kKlRisk, 14,
       {"n", "d", "delta", "s_n", "s_circ"}, {}, 1.0 / 112, "adaptive"},
      {BoundId::kAdaptiveConfWhp, "adaptive_conf_whp", K::kUpperTail,
       S::kKlRisk, 14, {"n", "d", "delta", "s_n", "s_circ"}, {}, 1.0 / 112,
       "adaptive-conf"},
      {BoundId::kMissingMassWhp, "missing_mass_whp", K::kUpperTail,
       S::kUnderestimatedMass, 8, {"n", "delta", "s_circ"}, {}, 1.0 / 112, ""},
      {BoundId::kConfIndepLower, "conf_indep_lower", K::kLowerTail, S::kKlRisk,
       1, {"n", "d", "delta"}, {"kappa"}, 0, ""},
      {BoundId::kMinimaxLower, "minimax_lower", K::kLowerTail, S::kKlRisk, 1,
       {"n", "d", "delta"}, {}, 0, ""},
      {BoundId::kConfIndepLemma, "conf_indep_lemma", K::kLowerTail, S::kKlRisk,
       1, {"n", "delta"}, {"kappa", "d"}, 0, ""},
      {BoundId::kTwoPointLemma, "two_point_lemma", K::kLowerTail, S::kKlRisk, 1,
       {"n", "d", "delta"}, {}, 0, ""},
      {BoundId::kSparseLower, "sparse_lower", K::kLowerTail, S::kKlRisk, 1,
       {"n", "d", "s"}, {}, 0, ""},
      {BoundId::kSparseTailLower, "sparse_tail_lower", K::kLowerTail,
       S::kKlRisk, 1, {"n", "d", "s", "delta"}, {}, 0, ""},
      {BoundId::kMcallesterOrtiz, "mcallester_ortiz", K::kUpperTail,
       S::kMissingMass, 1, {"n", "delta", "expected_missing"}, {}, 0, ""},
      {BoundId::kBenhamou, "benhamou", K::kUpperTail, S::kMissingMass, 1,
       {"n", "delta", "expected_missing", "d_n_plus"}, {}, 0, ""},
      {BoundId::kTypesReverseKl, "types_reverse_kl", K::kUpperTail,
       S::kReverseKl, 1, {"n", "d", "delta"}, {}, 0, ""},
      {BoundId::kAgrawalReverseKl, "agrawal_reverse_kl", K::kUpperTail,
       S::kReverseKl, 1, {"n", "d", "delta"}, {}, 0, ""},
      {BoundId::kHellingerWhp, "hellinger_whp", K::kUpperTail,
       S::kEmpiricalHellinger, 2, {"n", "delta", "s_n"}, {}, 0, ""},
  };
  return registry;
}

class Checker {
 public:
  void Require(bool ok, const std::string& condition) {
    if (!ok) warnings_.push_back("outside validity range: " + condition);
  }
  std::vector<std::string> Take() { return std::move(warnings_); }

 private:
  std::vector<std::string> warnings_;
};

double Get(const BoundParams& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

std::span<const BoundId> all_bound_ids() {
  static const std::vector<BoundId> ids = [] {
    std::vector<BoundId> out;
    for (const BoundInfo& info : Registry()) out.push_back(info.id);
    return out;
  }();
  return ids;
}

const BoundInfo& bound_info(BoundId id) {
  return Registry()[static_cast<std::size_t>(id)];
}

std::string_view bound_name(BoundId id) { return bound_info(id).name; }

BoundId parse_bound_id(std::string_view name) {
  for (const BoundInfo& info : Registry()) {
    if (info.name == name) return info.id;
  }
  throw ValidationError("unknown bound id '" + std::string(name) + "'");
}

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::kKlRisk:
      return "kl_risk";
    case Statistic::kMissingMass:
      return "missing_mass";
    case Statistic::kUnderestimatedMass:
      return "underestimated_mass";
    case Statistic::kReverseKl:
      return "reverse_kl";
    case Statistic::kEmpiricalHellinger:
      return "empirical_hellinger";
  }
  return "unknown";
}

BoundValue bound_value(BoundId id, const BoundParams& params) {
  const BoundInfo& info = bound_info(id);
  for (std::string_view sym : info.symbols) {
    if (params.find(sym) == params.end()) {
      throw SchemaError(std::string(info.name) + ": missing parameter '" +
                        std::string(sym) + "'");
    }
  }
  for (const auto& [key, value] : params) {
    const bool known =
        std::find(info.symbols.begin(), info.symbols.end(), key) !=
            info.symbols.end() ||
        std::find(info.optional_symbols.begin(), info.optional_symbols.end(),
                  key) != info.optional_symbols.end();
    if (!known) {
      throw SchemaError(std::string(info.name) + ": unexpected parameter '" +
                        key + "'");
    }
    if (std::isnan(value)) {
      throw DomainError(std::string(info.name) + ": parameter '" + key +
                        "' is NaN");
    }
  }

  const double n = Get(params, "n", 0.0);
  if (!(n > 0.0)) throw DomainError(std::string(info.name) + ": n must be > 0");
  const double d = Get(params, "d", 2.0);
  if (!(d > 0.0)) throw DomainError(std::string(info.name) + ": d must be > 0");
  const double delta = Get(params, "delta", 0.5);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError(std::string(info.name) + ": delta must lie in (0, 1)");
  }
  const double kappa = Get(params, "kappa", 1.0);
  const double s = Get(params, "s", 1.0);
  const double s_n = Get(params, "s_n", 1.0);
  const double s_circ = Get(params, "s_circ", 1.0);
  const double expected_missing = Get(params, "expected_missing", 0.0);
  const double d_n_plus = Get(params, "d_n_plus", 0.0);

  const double e = std::numbers::e;
  const double big_l = std::log(1.0 / delta);
  const double log_l = std::log(big_l);
  const double log_d = std::log(d);

  Checker check;
  BoundValue out;
  switch (id) {
    case BoundId::kExpectationLaplace:
      check.Require(n >= 2 && d >= 2, "n, d >= 2");
      out.value = std::log1p((d - 1.0) / (n + 1.0));
      break;
    case BoundId::kExpectationAdaptive:
      check.Require(n >= 2 && d >= 2, "n, d >= 2");
      out.value = (2.4 * s_n + 2.0 * s_circ * std::log(e * d / s_circ)) /
                  (n + 1.0);
      break;
    case BoundId::kLaplaceWhp:
    case BoundId::kConfWhp:
      check.Require(n >= 12, "n >= 12");
      check.Require(d >= 2, "d >= 2");
      check.Require(delta > std::exp(-n / 6.0) && delta < std::exp(-2.0),
                    "delta in (e^{-n/6}, e^{-2})");
      out.value = id == BoundId::kLaplaceWhp
                      ? 110000.0 * (d + big_l * log_l) / n
                      : 110000.0 * (d + log_d * big_l) / n;
      break;
    case BoundId::kAdaptiveWhp:
    case BoundId::kAdaptiveConfWhp: {
      check.Require(n >= 12, "n >= 12");
      check.Require(d >= 3, "d >= 3");
      check.Require(delta > std::exp(-n / 6.0) && delta < std::exp(-2.0),
                    "delta in (e^{-n/6}, e^{-2})");
      const double deviation = id == BoundId::kAdaptiveWhp
                                   ? std::max(log_d, log_l) * big_l
                                   : log_d * big_l;
      out.value =
          121000.0 * (s_n + s_circ * std::log(e * d / s_n) + deviation) / n;
      break;
    }
    case BoundId::kMissingMassWhp:
      check.Require(n >= 2, "n >= 2");
      check.Require(delta < std::exp(-1.0), "delta in (0, e^{-1})");
      out.value = (336.0 * s_circ + 2500.0 * e * big_l) / n;
      break;
    case BoundId::kConfIndepLower:
      check.Require(n >= d && d >= 4000, "n >= d >= 4000");
      check.Require(kappa >= 1, "kappa >= 1");
      check.Require(delta > std::exp(-n) && delta < std::exp(-16 * kappa * kappa),
                    "delta in (e^{-n}, e^{-16 kappa^2})");
      out.value = (d + big_l * log_l) / (5000.0 * n);
      break;
    case BoundId::kMinimaxLower:
      check.Require(n >= d && d >= 5000, "n >= d >= 5000");
      check.Require(delta > std::exp(-n) && delta < std::exp(-1.0),
                    "delta in (e^{-n}, e^{-1})");
      out.value = (d + log_d * big_l) / (5000.0 * n);
      break;
    case BoundId::kConfIndepLemma:
      if (params.contains("d")) check.Require(n >= d && d >= 2, "n >= d >= 2");
      check.Require(kappa >= 1, "kappa >= 1");
      check.Require(delta > std::exp(-n) && delta < std::exp(-16 * kappa * kappa),
                    "delta in (e^{-n}, e^{-16 kappa^2})");
      out.value = big_l * log_l / (10.0 * n);
      break;
    case BoundId::kTwoPointLemma:
      check.Require(n >= d && d >= 2, "n >= d >= 2");
      check.Require(delta > std::exp(-n) && delta < std::exp(-1.0),
                    "delta in (e^{-n}, e^{-1})");
      out.value = log_d * big_l / (14.0 * n);
      break;
    case BoundId::kSparseLower:
      check.Require(n >= 2 && d >= 2, "n, d >= 2");
      check.Require(s >= 1 && s <= std::min(n, d / 55.0),
                    "1 <= s <= min(n, d/55)");
      out.value = s * std::log(e * d / s) / (300.0 * n);
      break;
    case BoundId::kSparseTailLower:
      check.Require(n >= 110 && d >= 110, "n, d >= 110");
      check.Require(s >= 2 && s <= std::min(n, d / 55.0),
                    "2 <= s <= min(n, d/55)");
      check.Require(delta > std::exp(-n) && delta < std::exp(-2.0),
                    "delta in (e^{-n}, e^{-2})");
      out.value = (s * std::log(e * d / s) + log_d * big_l) / (320.0 * n);
      break;
    case BoundId::kMcallesterOrtiz:
      out.value = expected_missing + std::sqrt(big_l / n);
      break;
    case BoundId::kBenhamou:
      out.value = expected_missing + std::sqrt(2.0 * d_n_plus * big_l) / n +
                  big_l / n;
      break;
    case BoundId::kTypesReverseKl:
      check.Require(n >= 2 && d >= 2, "n, d >= 2");
      out.value = (d * std::log(n + 1.0) + big_l) / n;
      break;
    case BoundId::kAgrawalReverseKl:
      check.Require(n >= 2 && d >= 2, "n, d >= 2");
      out.value = (6.0 * d + 6.0 * big_l) / n;
      break;
    case BoundId::kHellingerWhp:
      check.Require(n >= 2, "n >= 2");
      out.value = (4.0 * s_n + 7.0 * big_l) / n;
      break;
  }
  out.warnings = check.Take();
  return out;
}

}  // namespace kldist
