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

#include "kldist/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "kldist/adversarial.hpp"
#include "kldist/errors.hpp"
#include "kldist/sampling.hpp"

namespace kldist {
namespace {

constexpr std::uint64_t kBlockSize = 64;
constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned ResolveWorkers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs body(t) for t in [0, count) on fixed-size blocks claimed in order from
// a shared counter. The first exception thrown by any worker is rethrown.
template <typename Body>
void ParallelTrials(std::uint64_t count, unsigned workers, const Body& body) {
  const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    try {
      while (true) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= blocks) return;
        const std::uint64_t end = std::min(count, (b + 1) * kBlockSize);
        for (std::uint64_t t = b * kBlockSize; t < end; ++t) body(t);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next.store(blocks);
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(ResolveWorkers(workers), blocks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

// Rank ceil(x) with x = q T, treating x within rounding of an integer as that
// integer (0.96 * 100000 must give 96000, not 96001).
std::uint64_t CeilRank(double q, std::uint64_t total) {
  const double x = q * static_cast<double>(total);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

// Smallest k with P(Binomial(trials, q) <= k) >= level.
std::uint64_t BinomialQuantile(std::uint64_t trials, double q, double level) {
  const boost::math::binomial_distribution<double> law(
      static_cast<double>(trials), q);
  std::uint64_t lo = 0;
  std::uint64_t hi = trials;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (boost::math::cdf(law, static_cast<double>(mid)) >= level) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

struct TrialValues {
  std::vector<double> kl;
  std::vector<double> missing;
  std::vector<double> under;
  std::vector<double> reverse_kl;
  std::vector<double> hellinger;

  std::vector<double>& For(Statistic s) {
    switch (s) {
      case Statistic::kKlRisk:
        return kl;
      case Statistic::kMissingMass:
        return missing;
      case Statistic::kUnderestimatedMass:
        return under;
      case Statistic::kReverseKl:
        return reverse_kl;
      case Statistic::kEmpiricalHellinger:
        return hellinger;
    }
    return kl;
  }
};

TrialValues RunTrials(const ExperimentConfig& config,
                      const std::vector<Statistic>& wanted) {
  validate(config);
  auto needs = [&](Statistic s) {
    return std::find(wanted.begin(), wanted.end(), s) != wanted.end();
  };
  TrialValues values;
  for (Statistic s : wanted) values.For(s).assign(config.trials, 0.0);
  const ProbVector& p = config.distribution;
  const CategoricalSampler sampler(p);
  const double n = static_cast<double>(config.n);
  ParallelTrials(config.trials, config.workers, [&](std::uint64_t t) {
    PhiloxRng rng(RngSeed{config.master_seed, t});
    const CountVector counts = draw_counts(sampler, config.n, rng);
    if (needs(Statistic::kKlRisk)) {
      values.kl[t] = kl_divergence(p, estimate(config.spec, counts)).value();
    }
    if (needs(Statistic::kMissingMass) ||
        needs(Statistic::kUnderestimatedMass)) {
      const SampleSummary summary = summarize(p, counts);
      if (needs(Statistic::kMissingMass)) values.missing[t] = summary.missing_mass;
      if (needs(Statistic::kUnderestimatedMass)) {
        values.under[t] = summary.underestimated_mass;
      }
    }
    if (needs(Statistic::kReverseKl) || needs(Statistic::kEmpiricalHellinger)) {
      CompensatedSum reverse;
      CompensatedSum hell;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double freq = static_cast<double>(counts[j]) / n;
        reverse.add(kl_term(freq, p[j]).value());
        const double diff = std::sqrt(freq) - std::sqrt(p[j]);
        hell.add(diff * diff);
      }
      if (needs(Statistic::kReverseKl)) values.reverse_kl[t] = reverse.value();
      if (needs(Statistic::kEmpiricalHellinger)) {
        values.hellinger[t] = hell.value();
      }
    }
  });
  return values;
}

std::string_view EstimatorHead(const EstimatorSpec& spec) {
  static thread_local std::string text;
  text = format_estimator_spec(spec);
  return std::string_view(text).substr(0, text.find(':'));
}

std::vector<std::string> EstimatorWarnings(const ExperimentConfig& config,
                                           const BoundInfo& info) {
  std::vector<std::string> out;
  if (info.statistic == Statistic::kKlRisk && !info.estimator.empty() &&
      EstimatorHead(config.spec) != info.estimator) {
    out.push_back("bound is stated for the '" + std::string(info.estimator) +
                  "' estimator");
  }
  return out;
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.trials == 0) throw ValidationError("experiment: trials must be >= 1");
  if (config.n == 0) throw ValidationError("experiment: n must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw ValidationError("experiment: delta must lie in (0, 1)");
  }
  validate(config.spec);
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kHoldsVacuous:
      return "holds_vacuous";
    case Verdict::kViolated:
      return "violated";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

QuantileBand quantile_band(std::span<const double> sorted, double q,
                           double confidence) {
  if (sorted.empty()) throw DomainError("quantile_band: empty sample");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile_band: q must lie in (0, 1)");
  const std::uint64_t total = sorted.size();
  const double alpha = 1.0 - confidence;
  QuantileBand band;
  band.order = q;
  const std::uint64_t rank = std::clamp<std::uint64_t>(CeilRank(q, total), 1, total);
  band.quantile = sorted[rank - 1];
  const std::uint64_t low_rank = BinomialQuantile(total, q, alpha / 2.0);
  const std::uint64_t high_rank = BinomialQuantile(total, q, 1.0 - alpha / 2.0) + 1;
  band.low = low_rank == 0 ? ExtendedReal(0.0)
                           : ExtendedReal(sorted[std::min(low_rank, rank) - 1]);
  band.high = high_rank > total
                  ? ExtendedReal::Infinity()
                  : ExtendedReal(sorted[std::max(high_rank, rank) - 1]);
  return band;
}

ProportionInterval clopper_pearson(std::uint64_t successes,
                                   std::uint64_t trials, double confidence) {
  if (trials == 0 || successes > trials) {
    throw DomainError("clopper_pearson: need 0 <= successes <= trials > 0");
  }
  using Law = boost::math::binomial_distribution<double>;
  const double alpha = (1.0 - confidence) / 2.0;
  const auto t = static_cast<double>(trials);
  const auto k = static_cast<double>(successes);
  ProportionInterval out;
  out.estimate = k / t;
  out.low = successes == 0 ? 0.0 : Law::find_lower_bound_on_p(t, k, alpha);
  out.high = successes == trials ? 1.0 : Law::find_upper_bound_on_p(t, k, alpha);
  return out;
}

std::vector<double> mc_statistic_values(const ExperimentConfig& config,
                                        Statistic statistic) {
  return std::move(RunTrials(config, {statistic}).For(statistic));
}

ExtendedReal statistic_envelope(const ExperimentConfig& config,
                                Statistic statistic) {
  const ProbVector& p = config.distribution;
  switch (statistic) {
    case Statistic::kKlRisk: {
      if (!is_smoothing(config.spec)) return ExtendedReal::Infinity();
      // Every coordinate of an add-lambda estimate is at least
      // lambda / (n + lambda d), which increases with lambda.
      const double lambda = min_smoothing_level(config.spec, p.size());
      const double n = static_cast<double>(config.n);
      return std::log((n + lambda * static_cast<double>(p.size())) / lambda);
    }
    case Statistic::kMissingMass:
    case Statistic::kUnderestimatedMass:
      return 1.0;
    case Statistic::kReverseKl: {
      double smallest = 1.0;
      for (double pj : p) {
        if (pj > 0.0) smallest = std::min(smallest, pj);
      }
      return std::log(1.0 / smallest);
    }
    case Statistic::kEmpiricalHellinger:
      return 2.0;
  }
  return ExtendedReal::Infinity();
}

BoundParams bound_params_for(const ExperimentConfig& config, BoundId id) {
  const BoundInfo& info = bound_info(id);
  const ProbVector& p = config.distribution;
  const double n = static_cast<double>(config.n);
  BoundParams params;
  for (std::string_view sym : info.symbols) {
    double value = 0.0;
    if (sym == "n") {
      value = n;
    } else if (sym == "d") {
      value = static_cast<double>(p.size());
    } else if (sym == "delta") {
      value = config.delta;
    } else if (sym == "s_n") {
      value = effective_support(p, n);
    } else if (sym == "s_circ") {
      value = effective_missing_support(p, n * info.s_circ_scale);
    } else if (sym == "expected_missing") {
      value = expected_missing_mass(p, config.n);
    } else if (sym == "d_n_plus") {
      value = occupancy_variance_proxy(p, n);
    } else if (sym == "s") {
      value = static_cast<double>(p.support_size());
    } else {
      throw SchemaError("no value available for parameter '" +
                        std::string(sym) + "'");
    }
    params.emplace(std::string(sym), value);
  }
  return params;
}

TailReport evaluate_tail(const ExperimentConfig& config, BoundId id,
                         std::span<const double> sorted) {
  const BoundInfo& info = bound_info(id);
  if (info.kind != BoundKind::kUpperTail) {
    throw NotApplicableError(std::string(info.name) +
                             " is not an upper-tail bound");
  }
  const BoundValue rhs = bound_value(id, bound_params_for(config, id));
  TailReport r;
  r.bound = id;
  r.statistic = info.statistic;
  r.failure_multiplier = info.failure_multiplier;
  r.quantile_order = 1.0 - info.failure_multiplier * config.delta;
  r.bound_rhs = rhs.value;
  r.envelope = statistic_envelope(config, info.statistic);
  r.validity_warnings = rhs.warnings;
  for (std::string& w : EstimatorWarnings(config, info)) {
    r.validity_warnings.push_back(std::move(w));
  }
  const auto first_exceeding =
      std::lower_bound(sorted.begin(), sorted.end(), rhs.value);
  r.exceedances = static_cast<std::uint64_t>(sorted.end() - first_exceeding);
  r.exceedance = clopper_pearson(r.exceedances, sorted.size());

  if (r.quantile_order <= 0.0) {
    r.validity_warnings.push_back("m delta >= 1: the claim is vacuous");
    r.empirical_quantile = r.ci_low = r.ci_high = ExtendedReal(0.0);
    r.verdict = Verdict::kHoldsVacuous;
    return r;
  }
  const QuantileBand band = quantile_band(sorted, r.quantile_order);
  r.empirical_quantile = band.quantile;
  r.ci_low = band.low;
  r.ci_high = band.high;
  if (ExtendedReal(r.bound_rhs) >= r.envelope) {
    r.verdict = Verdict::kHoldsVacuous;
  } else if (band.low > ExtendedReal(r.bound_rhs)) {
    r.verdict = Verdict::kViolated;
  } else if (band.high <= ExtendedReal(r.bound_rhs)) {
    r.verdict = Verdict::kHolds;
  } else {
    r.verdict = Verdict::kInconclusive;
  }
  return r;
}

std::vector<BoundId> default_tail_bounds(const EstimatorSpec& spec) {
  if (std::holds_alternative<spec::Laplace>(spec)) return {BoundId::kLaplaceWhp};
  if (std::holds_alternative<spec::ConfDependent>(spec)) return {BoundId::kConfWhp};
  if (std::holds_alternative<spec::Adaptive>(spec)) return {BoundId::kAdaptiveWhp};
  if (std::holds_alternative<spec::AdaptiveConf>(spec)) {
    return {BoundId::kAdaptiveConfWhp};
  }
  return {};
}

std::vector<BoundId> default_missing_bounds() {
  return {BoundId::kMissingMassWhp, BoundId::kMcallesterOrtiz,
          BoundId::kBenhamou};
}

BoundCheckReport mc_risk_tail(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  std::vector<BoundId> ids = config.bound_ids;
  if (ids.empty()) ids = default_tail_bounds(config.spec);
  if (ids.empty()) {
    throw SchemaError("no default tail bound for estimator '" +
                      format_estimator_spec(config.spec) +
                      "'; pass bound ids explicitly");
  }
  std::vector<Statistic> wanted;
  for (BoundId id : ids) {
    const BoundInfo& info = bound_info(id);
    if (info.kind != BoundKind::kUpperTail) {
      throw NotApplicableError(std::string(info.name) +
                               " is not an upper-tail bound");
    }
    if (std::find(wanted.begin(), wanted.end(), info.statistic) == wanted.end()) {
      wanted.push_back(info.statistic);
    }
  }
  TrialValues values = RunTrials(config, wanted);
  for (Statistic s : wanted) std::sort(values.For(s).begin(), values.For(s).end());

  BoundCheckReport report;
  report.config = config;
  report.config.bound_ids = ids;
  report.trials_used = config.trials;
  for (BoundId id : ids) {
    report.reports.push_back(
        evaluate_tail(config, id, values.For(bound_info(id).statistic)));
  }
  report.runtime_seconds = SecondsSince(start);
  return report;
}

ExpectationResult mc_expectation(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  std::vector<BoundId> ids = config.bound_ids;
  if (ids.empty()) {
    if (std::holds_alternative<spec::Laplace>(config.spec)) {
      ids = {BoundId::kExpectationLaplace};
    } else if (std::holds_alternative<spec::Adaptive>(config.spec)) {
      ids = {BoundId::kExpectationAdaptive};
    }
  }
  for (BoundId id : ids) {
    if (bound_info(id).kind != BoundKind::kExpectation) {
      throw NotApplicableError(std::string(bound_name(id)) +
                               " is not an expectation bound");
    }
  }
  const std::vector<double> kl = mc_statistic_values(config, Statistic::kKlRisk);

  ExpectationResult result;
  result.config = config;
  result.config.bound_ids = ids;
  result.trials_used = config.trials;
  CompensatedSum sum;
  for (double x : kl) {
    if (std::isinf(x)) result.infinite = true;
    sum.add(x);
  }
  const double t = static_cast<double>(kl.size());
  if (result.infinite) {
    result.mean = ExtendedReal::Infinity();
    result.std_error = kInf;
  } else {
    const double mean = sum.value() / t;
    CompensatedSum squares;
    for (double x : kl) squares.add((x - mean) * (x - mean));
    result.mean = mean;
    result.std_error =
        kl.size() > 1 ? std::sqrt(squares.value() / (t - 1.0) / t) : kInf;
  }
  const ExtendedReal envelope = statistic_envelope(config, Statistic::kKlRisk);
  for (BoundId id : ids) {
    ExpectationReport r;
    r.bound = id;
    const BoundValue rhs = bound_value(id, bound_params_for(config, id));
    r.bound_rhs = rhs.value;
    r.envelope = envelope;
    r.validity_warnings = rhs.warnings;
    for (std::string& w : EstimatorWarnings(config, bound_info(id))) {
      r.validity_warnings.push_back(std::move(w));
    }
    if (result.infinite) {
      r.validity_warnings.push_back("infinite KL in some trial");
      r.verdict = Verdict::kViolated;
    } else if (ExtendedReal(r.bound_rhs) >= envelope) {
      r.verdict = Verdict::kHoldsVacuous;
    } else {
      const double m = result.mean.value();
      const double margin = kExpectationZ * result.std_error;
      if (m - margin > r.bound_rhs) {
        r.verdict = Verdict::kViolated;
      } else if (m + margin <= r.bound_rhs) {
        r.verdict = Verdict::kHolds;
      } else {
        r.verdict = Verdict::kInconclusive;
      }
    }
    result.reports.push_back(std::move(r));
  }
  result.runtime_seconds = SecondsSince(start);
  return result;
}

LowerBoundCheck check_lower_bound_construction(const EstimatorFn& estimator,
                                               std::uint64_t n, std::size_t d,
                                               double delta, double kappa,
                                               LowerBoundMode mode) {
  if (n == 0 || d < 2) {
    throw ValidationError("lower-bound check: need n >= 1 and d >= 2");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("lower-bound check: delta must lie in (0, 1)");
  }
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double big_l = std::log(1.0 / delta);

  LowerBoundCheck out;
  if (nn < dd) out.warnings.push_back("outside validity range: n >= d");
  std::vector<std::uint64_t> all_zero(d, 0);
  all_zero[0] = n;
  const ProbVector q = estimator(CountVector(std::move(all_zero)));
  if (q.size() != d) throw ShapeError("lower-bound check: estimator changed d");

  std::size_t witness = 1;
  for (std::size_t j = 2; j < d; ++j) {
    if (q[j] < q[witness]) witness = j;
  }
  const ExtendedReal dirac_kl =
      q[0] > 0.0 ? ExtendedReal(std::log(1.0 / q[0])) : ExtendedReal::Infinity();
  auto use_dirac = [&](std::string branch, double threshold) {
    out.branch = std::move(branch);
    out.witness = 0;
    out.adversary = dirac(d, 0);
    out.event_probability = 1.0;
    out.kl_on_event = dirac_kl;
    out.threshold = threshold;
  };
  auto use_mixture = [&](double threshold) {
    out.branch = "mixture";
    out.witness = witness;
    out.adversary = conf_indep_adversary(n, delta, witness, d);
    out.event_probability = std::pow(out.adversary[0], nn);
    out.kl_on_event = kl_divergence(out.adversary, q);
    out.threshold = threshold;
  };

  if (mode == LowerBoundMode::kConfIndependent) {
    if (!(kappa >= 1.0)) out.warnings.push_back("outside validity range: kappa >= 1");
    if (!(delta > std::exp(-nn) && delta < std::exp(-16.0 * kappa * kappa))) {
      out.warnings.push_back(
          "outside validity range: delta in (e^{-n}, e^{-16 kappa^2})");
    }
    const double threshold = big_l * std::log(big_l) / (10.0 * nn);
    if (dirac_kl > ExtendedReal(kappa * dd / nn)) {
      // The estimator already fails the kappa d / n requirement at the Dirac
      // mass, which then serves as the hard instance.
      use_dirac("hypothesis-violated", threshold);
    } else {
      use_mixture(threshold);
    }
  } else {
    if (!(delta > std::exp(-nn) && delta < std::exp(-1.0))) {
      out.warnings.push_back("outside validity range: delta in (e^{-n}, e^{-1})");
    }
    const double alpha = (1.0 - q[0]) * nn / dd;
    if (alpha >= big_l / (7.0 * std::sqrt(dd))) {
      use_dirac("dirac", std::log(dd) * big_l / (14.0 * nn));
    } else {
      use_mixture(std::log(dd) * big_l / (10.0 * nn));
    }
  }
  out.satisfied = out.kl_on_event >= ExtendedReal(out.threshold);
  return out;
}

std::vector<RegimeCell> regime_map(const ExperimentConfig& base,
                                   std::span<const std::uint64_t> n_grid,
                                   std::span<const double> delta_grid) {
  if (n_grid.empty() || delta_grid.empty()) {
    throw ValidationError("regime_map: grids must be nonempty");
  }
  std::vector<RegimeCell> cells;
  for (std::uint64_t n : n_grid) {
    for (double delta : delta_grid) {
      ExperimentConfig config = base;
      config.n = n;
      config.delta = delta;
      // Confidence-dependent rules follow the cell's delta.
      if (auto* s = std::get_if<spec::ConfDependent>(&config.spec)) s->delta = delta;
      if (auto* s = std::get_if<spec::AdaptiveConf>(&config.spec)) s->delta = delta;
      cells.push_back({n, delta, mc_risk_tail(config).reports});
    }
  }
  return cells;
}

}  // namespace kldist
