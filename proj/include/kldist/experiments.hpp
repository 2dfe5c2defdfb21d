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

// Monte Carlo checks of registry bounds against empirical quantiles, and the
// deterministic check of the all-class-0 lower-bound constructions.
//
// Trial t always draws from the stream (master_seed, t), and per-trial values
// are stored by trial index, so every report is a function of the config
// alone and does not depend on the number of worker threads.
//
// Quantiles use the left-continuous inverse: the empirical q-quantile of T
// values is the ceil(q T)-th smallest. The 99% band around it is the pair of
// order statistics whose ranks are the 0.005 and 0.995 quantiles of
// Binomial(T, q) (distribution-free). Verdicts compare that band to the
// bound: violated iff the band lies above it, holds iff the band lies at or
// below it, inconclusive otherwise. A bound at or above the largest value the
// statistic can take is reported as holds_vacuous.

#ifndef KLDIST_EXPERIMENTS_HPP_
#define KLDIST_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kldist/bounds.hpp"
#include "kldist/distribution.hpp"
#include "kldist/estimators.hpp"
#include "kldist/numerics.hpp"

namespace kldist {

inline constexpr double kReportConfidence = 0.99;

struct ExperimentConfig {
  ProbVector distribution = uniform(2);
  std::uint64_t n = 100;
  EstimatorSpec spec = spec::Laplace{};
  double delta = 0.05;
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 0;
  // Empty means the default bounds for the command.
  std::vector<BoundId> bound_ids;
  // Worker threads; 0 uses the hardware concurrency. Never affects results.
  unsigned workers = 0;
};

// Throws ValidationError for trials == 0, n == 0 or delta outside (0, 1).
void validate(const ExperimentConfig& config);

enum class Verdict { kHolds, kHoldsVacuous, kViolated, kInconclusive };
std::string_view verdict_name(Verdict v);

struct QuantileBand {
  double order = 0.0;
  ExtendedReal quantile;
  ExtendedReal low;
  ExtendedReal high;
};

// Band for the order-q quantile of the sorted sample. Values below the first
// order statistic are reported as 0 (every statistic here is nonnegative) and
// values above the last as +inf. Requires 0 < q < 1 and a nonempty sample.
QuantileBand quantile_band(std::span<const double> sorted, double q,
                           double confidence = kReportConfidence);

struct ProportionInterval {
  double estimate = 0.0;
  double low = 0.0;
  double high = 1.0;
};

// Clopper-Pearson interval for `successes` out of `trials`.
ProportionInterval clopper_pearson(std::uint64_t successes,
                                   std::uint64_t trials,
                                   double confidence = kReportConfidence);

struct TailReport {
  BoundId bound = BoundId::kLaplaceWhp;
  Statistic statistic = Statistic::kKlRisk;
  double failure_multiplier = 1.0;
  // 1 - m delta; the claim is vacuous when this is <= 0.
  double quantile_order = 0.0;
  ExtendedReal empirical_quantile;
  ExtendedReal ci_low;
  ExtendedReal ci_high;
  double bound_rhs = 0.0;
  // Largest value the statistic can take.
  ExtendedReal envelope;
  // Trials with statistic >= bound_rhs, and the Clopper-Pearson interval on
  // their rate; the bound claims a rate of at most m delta.
  std::uint64_t exceedances = 0;
  ProportionInterval exceedance;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<std::string> validity_warnings;
};

struct BoundCheckReport {
  ExperimentConfig config;
  std::vector<TailReport> reports;
  std::uint64_t trials_used = 0;
  // Wall-clock seconds; not part of serialized reports unless requested.
  double runtime_seconds = 0.0;
};

// Per-trial values of one statistic, indexed by trial.
std::vector<double> mc_statistic_values(const ExperimentConfig& config,
                                        Statistic statistic);

// Largest value `statistic` can take for this config (+inf when unbounded).
ExtendedReal statistic_envelope(const ExperimentConfig& config,
                                Statistic statistic);

// Registry parameters for `id` derived from the config: n, d, delta and the
// sparsity functionals of the true distribution.
BoundParams bound_params_for(const ExperimentConfig& config, BoundId id);

// Builds a report from already sorted per-trial values.
TailReport evaluate_tail(const ExperimentConfig& config, BoundId id,
                         std::span<const double> sorted);

// Default tail bounds for the config's estimator (its high-probability
// bound), used when bound_ids is empty.
std::vector<BoundId> default_tail_bounds(const EstimatorSpec& spec);
// Missing-mass bounds: missing_mass_whp, mcallester_ortiz and benhamou.
std::vector<BoundId> default_missing_bounds();

// Runs the trials and reports each requested upper-tail bound. Throws
// NotApplicableError for expectation or lower-tail bounds.
BoundCheckReport mc_risk_tail(const ExperimentConfig& config);

struct ExpectationReport {
  BoundId bound = BoundId::kExpectationLaplace;
  double bound_rhs = 0.0;
  ExtendedReal envelope;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<std::string> validity_warnings;
};

struct ExpectationResult {
  ExperimentConfig config;
  ExtendedReal mean;
  double std_error = 0.0;
  // Some trial had infinite KL; any finite bound is then violated.
  bool infinite = false;
  std::vector<ExpectationReport> reports;
  std::uint64_t trials_used = 0;
  double runtime_seconds = 0.0;
};

// Number of standard errors separating mean and bound for a decisive
// expectation verdict.
inline constexpr double kExpectationZ = 4.0;

// Mean KL risk with its standard error, compared to the expectation bounds
// (the estimator's default one when bound_ids is empty).
ExpectationResult mc_expectation(const ExperimentConfig& config);

enum class LowerBoundMode {
  // Confidence-independent construction: threshold L log L / (10 n).
  kConfIndependent,
  // Two-point family: threshold log(d) L / (14 n) for the Dirac branch and
  // log(d) L / (10 n) for the mixture branch.
  kTwoPoint,
};

struct LowerBoundCheck {
  // "mixture", "dirac" or "hypothesis-violated".
  std::string branch;
  // Label j of the perturbed class (0 for the Dirac branches).
  std::size_t witness = 0;
  ProbVector adversary = uniform(2);
  // Probability of the all-class-0 sample under the adversary.
  double event_probability = 0.0;
  ExtendedReal kl_on_event;
  double threshold = 0.0;
  bool satisfied = false;
  std::vector<std::string> warnings;
};

// Evaluates the estimator on the all-class-0 sample and checks the lower-bound
// construction in closed form; no sampling.
LowerBoundCheck check_lower_bound_construction(const EstimatorFn& estimator,
                                               std::uint64_t n, std::size_t d,
                                               double delta, double kappa,
                                               LowerBoundMode mode);

struct RegimeCell {
  std::uint64_t n = 0;
  double delta = 0.0;
  std::vector<TailReport> reports;
};

// One mc_risk_tail run per (n, delta) cell, in row-major order over
// (n_grid, delta_grid). Throws ValidationError for an empty grid.
std::vector<RegimeCell> regime_map(const ExperimentConfig& base,
                                   std::span<const std::uint64_t> n_grid,
                                   std::span<const double> delta_grid);

}  // namespace kldist

#endif  // KLDIST_EXPERIMENTS_HPP_
