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

#include "kldist/report_io.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "json.hpp"
#include "kldist/distribution_json.hpp"

namespace kldist {
namespace {

using Json = nlohmann::ordered_json;

std::string F(double x) { return format_real(x); }
std::string F(ExtendedReal x) { return format_real(x.value()); }
std::string U(std::uint64_t x) { return std::to_string(x); }

// A JSON number rounded to 12 significant digits, or the string "inf".
Json Num(double x) {
  if (!std::isfinite(x)) return format_real(x);
  return std::strtod(format_real(x).c_str(), nullptr);
}
Json Num(ExtendedReal x) { return Num(x.value()); }

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

std::string TailRow(const ExperimentConfig& c, const TailReport& r) {
  std::string row;
  auto add = [&](const std::string& field) {
    if (!row.empty()) row += ',';
    row += field;
  };
  add(std::string(bound_name(r.bound)));
  add(std::string(statistic_name(r.statistic)));
  add(U(c.n));
  add(U(c.distribution.size()));
  add(csv_field(format_estimator_spec(c.spec)));
  add(F(c.delta));
  add(U(c.trials));
  add(U(c.master_seed));
  add(F(r.failure_multiplier));
  add(F(r.quantile_order));
  add(F(r.empirical_quantile));
  add(F(r.ci_low));
  add(F(r.ci_high));
  add(F(r.bound_rhs));
  add(F(r.envelope));
  add(U(r.exceedances));
  add(F(r.exceedance.estimate));
  add(F(r.exceedance.low));
  add(F(r.exceedance.high));
  add(std::string(verdict_name(r.verdict)));
  add(csv_field(Join(r.validity_warnings)));
  return row + "\n";
}

Json ConfigJson(const ExperimentConfig& c) {
  Json j;
  j["distribution"] = Json::parse(distribution_to_json(c.distribution));
  j["n"] = c.n;
  j["d"] = c.distribution.size();
  j["spec"] = format_estimator_spec(c.spec);
  j["delta"] = Num(c.delta);
  j["trials"] = c.trials;
  j["seed"] = c.master_seed;
  Json ids = Json::array();
  for (BoundId id : c.bound_ids) ids.push_back(std::string(bound_name(id)));
  j["bounds"] = ids;
  return j;
}

Json TailJson(const TailReport& r) {
  Json j;
  j["bound"] = std::string(bound_name(r.bound));
  j["statistic"] = std::string(statistic_name(r.statistic));
  j["multiplier"] = Num(r.failure_multiplier);
  j["quantile_order"] = Num(r.quantile_order);
  j["empirical_quantile"] = Num(r.empirical_quantile);
  j["ci_low"] = Num(r.ci_low);
  j["ci_high"] = Num(r.ci_high);
  j["bound_rhs"] = Num(r.bound_rhs);
  j["envelope"] = Num(r.envelope);
  j["exceedances"] = r.exceedances;
  j["exceedance_rate"] = Num(r.exceedance.estimate);
  j["exceedance_ci_low"] = Num(r.exceedance.low);
  j["exceedance_ci_high"] = Num(r.exceedance.high);
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["warnings"] = r.validity_warnings;
  return j;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string tail_csv_header() {
  return "bound,statistic,n,d,spec,delta,trials,seed,multiplier,"
         "quantile_order,empirical_quantile,ci_low,ci_high,bound_rhs,envelope,"
         "exceedances,exceedance_rate,exceedance_ci_low,exceedance_ci_high,"
         "verdict,warnings\n";
}

std::string to_csv(const BoundCheckReport& report, bool timing) {
  std::string out = tail_csv_header();
  for (const TailReport& r : report.reports) out += TailRow(report.config, r);
  if (timing) out += "# runtime_seconds," + F(report.runtime_seconds) + "\n";
  return out;
}

std::string to_json(const BoundCheckReport& report, bool timing) {
  Json j;
  j["config"] = ConfigJson(report.config);
  j["trials_used"] = report.trials_used;
  Json reports = Json::array();
  for (const TailReport& r : report.reports) reports.push_back(TailJson(r));
  j["reports"] = reports;
  if (timing) j["runtime_seconds"] = Num(report.runtime_seconds);
  return Dump(j);
}

std::string regime_csv(const ExperimentConfig& base,
                       std::span<const RegimeCell> cells) {
  std::string out = tail_csv_header();
  for (const RegimeCell& cell : cells) {
    ExperimentConfig c = base;
    c.n = cell.n;
    c.delta = cell.delta;
    for (const TailReport& r : cell.reports) out += TailRow(c, r);
  }
  return out;
}

std::string regime_json(const ExperimentConfig& base,
                        std::span<const RegimeCell> cells) {
  Json j;
  j["config"] = ConfigJson(base);
  Json rows = Json::array();
  for (const RegimeCell& cell : cells) {
    Json row;
    row["n"] = cell.n;
    row["delta"] = Num(cell.delta);
    Json reports = Json::array();
    for (const TailReport& r : cell.reports) reports.push_back(TailJson(r));
    row["reports"] = reports;
    rows.push_back(row);
  }
  j["cells"] = rows;
  return Dump(j);
}

std::string to_csv(const ExpectationResult& result, bool timing) {
  std::string out =
      "bound,n,d,spec,trials,seed,mean,std_error,bound_rhs,envelope,verdict,"
      "warnings\n";
  const ExperimentConfig& c = result.config;
  auto prefix = [&] {
    return U(c.n) + "," + U(c.distribution.size()) + "," +
           csv_field(format_estimator_spec(c.spec)) + "," + U(c.trials) + "," +
           U(c.master_seed) + "," + F(result.mean) + "," + F(result.std_error);
  };
  if (result.reports.empty()) {
    out += "," + prefix() + ",,,,\n";
  }
  for (const ExpectationReport& r : result.reports) {
    out += std::string(bound_name(r.bound)) + "," + prefix() + "," +
           F(r.bound_rhs) + "," + F(r.envelope) + "," +
           std::string(verdict_name(r.verdict)) + "," +
           csv_field(Join(r.validity_warnings)) + "\n";
  }
  if (timing) out += "# runtime_seconds," + F(result.runtime_seconds) + "\n";
  return out;
}

std::string to_json(const ExpectationResult& result, bool timing) {
  Json j;
  j["config"] = ConfigJson(result.config);
  j["trials_used"] = result.trials_used;
  j["mean"] = Num(result.mean);
  j["std_error"] = Num(result.std_error);
  j["infinite"] = result.infinite;
  Json reports = Json::array();
  for (const ExpectationReport& r : result.reports) {
    Json row;
    row["bound"] = std::string(bound_name(r.bound));
    row["bound_rhs"] = Num(r.bound_rhs);
    row["envelope"] = Num(r.envelope);
    row["verdict"] = std::string(verdict_name(r.verdict));
    row["warnings"] = r.validity_warnings;
    reports.push_back(row);
  }
  j["reports"] = reports;
  if (timing) j["runtime_seconds"] = Num(result.runtime_seconds);
  return Dump(j);
}

std::string to_csv(const LowerBoundCheck& check) {
  return "branch,witness,event_probability,kl_on_event,threshold,satisfied,"
         "warnings\n" +
         check.branch + "," + U(check.witness) + "," +
         F(check.event_probability) + "," + F(check.kl_on_event) + "," +
         F(check.threshold) + "," + (check.satisfied ? "true" : "false") + "," +
         csv_field(Join(check.warnings)) + "\n";
}

std::string to_json(const LowerBoundCheck& check) {
  Json j;
  j["branch"] = check.branch;
  j["witness"] = check.witness;
  j["adversary"] = Json::parse(distribution_to_json(check.adversary));
  j["event_probability"] = Num(check.event_probability);
  j["kl_on_event"] = Num(check.kl_on_event);
  j["threshold"] = Num(check.threshold);
  j["satisfied"] = check.satisfied;
  j["warnings"] = check.warnings;
  return Dump(j);
}

std::string oracle_json(const ExactFunctionals& f, double bound_rhs,
                        std::string_view verdict) {
  Json j;
  j["expected_kl"] = Num(f.expected_kl);
  j["expected_missing"] = Num(f.expected_missing);
  j["expected_distinct"] = Num(f.expected_distinct);
  j["total_probability"] = Num(f.total_probability);
  j["bound_rhs"] = Num(bound_rhs);
  j["verdict"] = std::string(verdict);
  Json atoms = Json::array();
  for (const auto& a : f.risk_distribution.atoms()) {
    atoms.push_back(Json::array({Num(a.value), Num(a.probability)}));
  }
  j["atoms"] = atoms;
  return Dump(j);
}

}  // namespace kldist
