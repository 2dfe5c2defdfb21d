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

#include "kldist/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "kldist/errors.hpp"

namespace kldist {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("estimator: delta must lie in (0, 1)");
  }
}

std::string Exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

CountVector::CountVector(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.size() < 2) {
    throw ValidationError("CountVector: need at least 2 classes");
  }
  for (std::uint64_t c : counts_) n_ += c;
}

std::size_t CountVector::distinct() const {
  return static_cast<std::size_t>(std::count_if(
      counts_.begin(), counts_.end(), [](std::uint64_t c) { return c > 0; }));
}

void validate(const EstimatorSpec& spec) {
  std::visit(Overloaded{
                 [](const spec::AddConstant& s) {
                   if (!(s.lambda > 0.0) || !std::isfinite(s.lambda)) {
                     throw ValidationError("add: lambda must be positive");
                   }
                 },
                 [](const spec::ConfDependent& s) { CheckDelta(s.delta); },
                 [](const spec::AdaptiveConf& s) { CheckDelta(s.delta); },
                 [](const auto&) {},
             },
             spec);
}

EstimatorSpec parse_estimator_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  const std::string_view arg = has_arg ? text.substr(colon + 1) : "";
  auto no_arg = [&](EstimatorSpec s) -> EstimatorSpec {
    if (has_arg) {
      throw ValidationError("estimator '" + std::string(head) +
                            "' takes no parameter");
    }
    return s;
  };
  auto need_arg = [&]() {
    if (!has_arg) {
      throw ValidationError("estimator '" + std::string(head) +
                            "' needs a parameter, e.g. " + std::string(head) +
                            ":0.01");
    }
    return parse_real(arg);
  };
  EstimatorSpec out;
  if (head == "mle") {
    out = no_arg(spec::Mle{});
  } else if (head == "laplace") {
    out = no_arg(spec::Laplace{});
  } else if (head == "kt") {
    out = no_arg(spec::KrichevskyTrofimov{});
  } else if (head == "adaptive") {
    out = no_arg(spec::Adaptive{});
  } else if (head == "add") {
    out = spec::AddConstant{need_arg()};
  } else if (head == "conf") {
    out = spec::ConfDependent{need_arg()};
  } else if (head == "adaptive-conf") {
    out = spec::AdaptiveConf{need_arg()};
  } else {
    throw ValidationError("unknown estimator '" + std::string(text) + "'");
  }
  validate(out);
  return out;
}

std::string format_estimator_spec(const EstimatorSpec& spec) {
  return std::visit(
      Overloaded{
          [](const spec::Mle&) -> std::string { return "mle"; },
          [](const spec::Laplace&) -> std::string { return "laplace"; },
          [](const spec::KrichevskyTrofimov&) -> std::string { return "kt"; },
          [](const spec::Adaptive&) -> std::string { return "adaptive"; },
          [](const spec::AddConstant& s) { return "add:" + Exact(s.lambda); },
          [](const spec::ConfDependent& s) { return "conf:" + Exact(s.delta); },
          [](const spec::AdaptiveConf& s) {
            return "adaptive-conf:" + Exact(s.delta);
          },
      },
      spec);
}

bool is_smoothing(const EstimatorSpec& spec) {
  return !std::holds_alternative<spec::Mle>(spec);
}

double smoothing_level(const EstimatorSpec& spec, std::size_t distinct,
                       std::size_t d) {
  validate(spec);
  if (distinct > d) {
    throw ValidationError("smoothing_level: more distinct classes than d");
  }
  const double dd = static_cast<double>(d);
  const double dn = static_cast<double>(distinct);
  auto need_sample = [&]() {
    if (distinct == 0) {
      throw ValidationError(
          "smoothing_level: adaptive rules need at least one observation");
    }
  };
  return std::visit(
      Overloaded{
          [](const spec::Mle&) -> double {
            throw NotApplicableError("smoothing_level: mle does not smooth");
          },
          [](const spec::Laplace&) { return 1.0; },
          [](const spec::KrichevskyTrofimov&) { return 0.5; },
          [](const spec::AddConstant& s) { return s.lambda; },
          [&](const spec::ConfDependent& s) {
            return std::max(1.0, std::log(1.0 / s.delta) / dd);
          },
          [&](const spec::Adaptive&) {
            need_sample();
            return dn / dd;
          },
          [&](const spec::AdaptiveConf& s) {
            need_sample();
            return std::max(dn, std::log(1.0 / s.delta)) / dd;
          },
      },
      spec);
}

double min_smoothing_level(const EstimatorSpec& spec, std::size_t d) {
  const double dd = static_cast<double>(d);
  if (std::holds_alternative<spec::AdaptiveConf>(spec)) {
    return std::max(1.0, std::log(1.0 / std::get<spec::AdaptiveConf>(spec).delta)) /
           dd;
  }
  // Every other rule is nondecreasing in D_n >= 1.
  return smoothing_level(spec, 1, d);
}

ProbVector add_lambda_estimate(const CountVector& counts, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("add_lambda_estimate: lambda must be positive");
  }
  const double d = static_cast<double>(counts.size());
  const double denom = static_cast<double>(counts.n()) + lambda * d;
  std::vector<double> p(counts.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = (static_cast<double>(counts[j]) + lambda) / denom;
  }
  return ProbVector::FromProbabilities(std::move(p));
}

ProbVector estimate(const EstimatorSpec& spec, const CountVector& counts) {
  if (counts.n() == 0) {
    throw ValidationError("estimate: empty sample (n = 0)");
  }
  if (std::holds_alternative<spec::Mle>(spec)) {
    const double n = static_cast<double>(counts.n());
    std::vector<double> p(counts.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] = static_cast<double>(counts[j]) / n;
    }
    return ProbVector::FromProbabilities(std::move(p));
  }
  return add_lambda_estimate(
      counts, smoothing_level(spec, counts.distinct(), counts.size()));
}

EstimatorFn as_function(const EstimatorSpec& spec) {
  validate(spec);
  return [spec](const CountVector& counts) { return estimate(spec, counts); };
}

RiskDecomposition risk_decomposition(const ProbVector& p,
                                     const CountVector& counts,
                                     double lambda) {
  if (p.size() != counts.size()) {
    throw ShapeError("risk_decomposition: dimension mismatch");
  }
  const double n = static_cast<double>(counts.n());
  const double d = static_cast<double>(p.size());
  if (!(lambda > 0.0) || !(lambda <= n / d)) {
    throw DomainError("risk_decomposition: lambda must lie in (0, n/d]");
  }
  RiskDecomposition out;
  out.lambda_used = lambda;
  out.bias_term = 7.0 * lambda * d / n;
  CompensatedSum hellinger;
  CompensatedSum residual;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double pj = p[j];
    const double nj = static_cast<double>(counts[j]);
    const double diff = std::sqrt(nj / n) - std::sqrt(pj);
    hellinger.add(diff * diff);
    if (pj >= 4.0 * lambda / n && nj <= n * pj / 4.0) {
      residual.add(pj * std::log(2.0 * n * pj / lambda));
    }
  }
  out.hellinger_term = hellinger.value();
  out.residual_term = ExtendedReal(residual.value());
  return out;
}

}  // namespace kldist
