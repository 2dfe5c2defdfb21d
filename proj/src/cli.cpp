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

#include "kldist/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kldist/bounds.hpp"
#include "kldist/distribution.hpp"
#include "kldist/distribution_json.hpp"
#include "kldist/errors.hpp"
#include "kldist/estimators.hpp"
#include "kldist/experiments.hpp"
#include "kldist/oracle.hpp"
#include "kldist/report_io.hpp"

namespace kldist::cli {
namespace {

using Settings = std::map<std::string, std::string>;

struct Flag {
  const char* name;
  const char* help;
};

const std::vector<Flag>& AllFlags() {
  static const std::vector<Flag> flags = {
      {"dist", "distribution as a JSON array or {\"kind\": ...} object"},
      {"kind", "distribution shorthand kind (uniform, geometric, ...)"},
      {"d", "number of classes"},
      {"rate", "geometric decay rate"},
      {"alpha", "polynomial decay exponent"},
      {"s", "sparse support size"},
      {"c", "sparse lower-frequency constant"},
      {"label", "dirac label"},
      {"n", "sample size"},
      {"spec", "estimator: mle, laplace, kt, add:<l>, conf:<delta>, adaptive, "
               "adaptive-conf:<delta>"},
      {"delta", "failure probability (decimal or e^<x>)"},
      {"trials", "Monte Carlo trials"},
      {"seed", "master seed"},
      {"workers", "worker threads (0: all cores); never changes results"},
      {"bounds", "comma-separated bound ids"},
      {"counts", "comma-separated class counts"},
      {"eps", "level for critical sample sizes and eps-bar"},
      {"kappa", "kappa of the confidence-independent construction"},
      {"mode", "lower-bound construction: conf-indep or two-point"},
      {"cap", "oracle composition cap"},
      {"n-grid", "comma-separated sample sizes"},
      {"delta-grid", "comma-separated failure probabilities"},
      {"out", "CSV output path (default: stdout)"},
      {"json", "JSON output path"},
      {"dump-config", "write the effective settings as JSON to this path"},
      {"config", "read settings from a JSON object; flags take precedence"},
      {"timing", "include wall-clock runtime in reports"},
  };
  return flags;
}

const char* const kDistFlags[] = {"dist", "kind", "d", "rate", "alpha", "s",
                                  "c", "label"};
const char* const kMcFlags[] = {"n",       "spec",   "delta", "trials",
                                "seed",    "workers", "bounds", "timing"};

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> flags;
};

std::vector<std::string> Concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

const std::vector<Command>& Commands() {
  const std::vector<std::string> dist(std::begin(kDistFlags), std::end(kDistFlags));
  const std::vector<std::string> mc(std::begin(kMcFlags), std::end(kMcFlags));
  const std::vector<std::string> io = {"out", "json", "dump-config", "config"};
  static const std::vector<Command> commands = {
      {"estimate", "apply an estimator to class counts",
       Concat({{"spec", "counts"}, io})},
      {"profile", "sparsity functionals and critical sample sizes",
       Concat({dist, {"n", "eps", "delta"}, io})},
      {"tail", "Monte Carlo quantiles of the KL risk against tail bounds",
       Concat({dist, mc, io})},
      {"expect", "Monte Carlo mean of the KL risk against expectation bounds",
       Concat({dist, mc, io})},
      {"missing", "Monte Carlo quantiles of missing and underestimated mass",
       Concat({dist, mc, io})},
      {"lower", "closed-form check of a lower-bound construction",
       Concat({{"spec", "n", "d", "delta", "kappa", "mode"}, io})},
      {"oracle", "exact risk distribution by enumerating count vectors",
       Concat({dist, {"n", "spec", "cap"}, io})},
      {"regime", "tail reports over a grid of sample sizes and deltas",
       Concat({dist, {"spec", "trials", "seed", "workers", "bounds", "n-grid",
                      "delta-grid"},
               io})},
  };
  return commands;
}

const char* HelpFor(const std::string& name) {
  for (const Flag& f : AllFlags()) {
    if (name == f.name) return f.help;
  }
  return "";
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw ValidationError("empty item in list '" + text + "'");
    }
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

class Options {
 public:
  explicit Options(Settings settings) : s_(std::move(settings)) {}

  bool has(const std::string& key) const { return s_.contains(key); }
  const std::string& str(const std::string& key) const {
    const auto it = s_.find(key);
    if (it == s_.end()) throw ValidationError("missing required flag --" + key);
    return it->second;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }
  double real(const std::string& key) const {
    try {
      return parse_real(str(key));
    } catch (const ValidationError& e) {
      throw ValidationError("--" + key + ": " + e.what());
    }
  }
  double real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }
  std::uint64_t count(const std::string& key) const {
    return ToCount(key, real(key));
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? count(key) : fallback;
  }
  static std::uint64_t ToCount(const std::string& key, double x) {
    if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19) {
      throw ValidationError("--" + key + " must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(x);
  }

  ProbVector distribution() const {
    if (has("dist")) {
      for (const char* key : {"kind", "rate", "alpha", "s", "c", "label"}) {
        if (has(key)) {
          throw ValidationError("--" + std::string(key) +
                                " cannot be combined with --dist");
        }
      }
      return parse_distribution(str("dist"));
    }
    if (!has("kind")) throw ValidationError("need --dist or --kind");
    nlohmann::json obj;
    obj["kind"] = str("kind");
    obj["d"] = real("d");
    for (const char* key : {"rate", "alpha", "s", "c", "label"}) {
      if (has(key)) obj[key] = real(key);
    }
    return parse_distribution(obj.dump());
  }

  EstimatorSpec spec() const {
    return parse_estimator_spec(str("spec", "laplace"));
  }

  std::vector<BoundId> bounds() const {
    std::vector<BoundId> out;
    if (!has("bounds")) return out;
    for (const std::string& name : SplitList(str("bounds"))) {
      out.push_back(parse_bound_id(name));
    }
    return out;
  }

  ExperimentConfig experiment() const {
    ExperimentConfig c;
    c.distribution = distribution();
    c.n = count("n", 100);
    c.spec = spec();
    c.delta = real("delta", 0.05);
    c.trials = count("trials", 1000);
    c.master_seed = count("seed", 0);
    c.workers = static_cast<unsigned>(count("workers", 0));
    c.bound_ids = bounds();
    validate(c);
    return c;
  }

 private:
  Settings s_;
};

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Flat JSON object -> settings. Scalars keep their text; arrays and objects
// (the distribution) are re-serialized.
Settings LoadConfig(const std::string& path, const std::string& command,
                    const std::vector<std::string>& allowed) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("config '" + path + "': malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("config '" + path + "': expected an object");
  Settings out;
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const auto& value = item.value();
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command) {
        throw SchemaError("config '" + path + "' is for command " + value.dump());
      }
      continue;
    }
    if (key == "config" || key == "dump-config" ||
        std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError("config '" + path + "': unexpected key '" + key + "'");
    }
    out[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return out;
}

std::string DumpConfig(const std::string& command, const Settings& settings) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  for (const auto& [key, value] : settings) {
    if (key == "config" || key == "dump-config") continue;
    doc[key] = value;
  }
  return doc.dump(2) + "\n";
}

// Writes the CSV to --out (or `out`) and the JSON to --json when given.
void Emit(const Options& opt, std::ostream& out, const std::string& csv,
          const std::string& json) {
  if (opt.has("out")) {
    WriteFile(opt.str("out"), csv);
  } else {
    out << csv;
  }
  if (opt.has("json")) WriteFile(opt.str("json"), json);
}

bool AnyViolated(const std::vector<TailReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const TailReport& r) {
    return r.verdict == Verdict::kViolated;
  });
}

int RunEstimate(const Options& opt, std::ostream& out) {
  std::vector<std::uint64_t> counts;
  for (const std::string& item : SplitList(opt.str("counts"))) {
    counts.push_back(Options::ToCount("counts", parse_real(item)));
  }
  const EstimatorSpec spec = opt.spec();
  const ProbVector p = estimate(spec, CountVector(counts));
  std::string csv = "class,probability\n";
  for (std::size_t j = 0; j < p.size(); ++j) {
    csv += std::to_string(j) + "," + format_real(p[j]) + "\n";
  }
  nlohmann::ordered_json j;
  j["spec"] = format_estimator_spec(spec);
  j["counts"] = counts;
  std::vector<double> probs(p.begin(), p.end());
  j["probabilities"] = probs;
  Emit(opt, out, csv, j.dump(2) + "\n");
  return kExitOk;
}

int RunProfile(const Options& opt, std::ostream& out) {
  const ProbVector p = opt.distribution();
  const double n = opt.real("n");
  const SparsityProfile prof = sparsity_profile(p, n);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"d", std::to_string(p.size())},
      {"n", format_real(prof.n)},
      {"s_n", format_real(prof.s_n)},
      {"s_circ", format_real(prof.s_circ)},
      {"s_bullet", format_real(prof.s_bullet)},
      {"d_n_plus", format_real(prof.d_n_plus)},
  };
  if (prof.s_diamond) rows.emplace_back("s_diamond", format_real(*prof.s_diamond));
  if (prof.expected_distinct) {
    rows.emplace_back("expected_distinct", format_real(*prof.expected_distinct));
  }
  if (prof.expected_missing) {
    rows.emplace_back("expected_missing", format_real(*prof.expected_missing));
  }
  if (opt.has("eps")) {
    const double eps = opt.real("eps");
    const CriticalSamples cs = critical_samples(p, eps, opt.real("delta", 0.05));
    rows.emplace_back("n_obs", std::to_string(cs.n_obs));
    rows.emplace_back("n_miss", std::to_string(cs.n_miss));
    rows.emplace_back("n_miss_at_boundary", cs.n_miss_at_boundary ? "true" : "false");
    rows.emplace_back("n_dev", format_real(cs.n_dev));
    rows.emplace_back("n_circ", std::to_string(cs.n_circ));
    rows.emplace_back("n_exp", std::to_string(cs.n_exp));
    const EpsBarResult eb = eps_bar(p, eps);
    rows.emplace_back("eps_bar", format_real(eb.value));
    rows.emplace_back("eps_bar_exact", eb.exact ? "true" : "false");
  }
  std::string csv = "key,value\n";
  nlohmann::ordered_json j;
  for (const auto& [key, value] : rows) {
    csv += key + "," + value + "\n";
    j[key] = value;
  }
  Emit(opt, out, csv, j.dump(2) + "\n");
  return kExitOk;
}

int RunTail(const Options& opt, std::ostream& out, bool missing) {
  ExperimentConfig config = opt.experiment();
  if (missing && config.bound_ids.empty()) config.bound_ids = default_missing_bounds();
  const BoundCheckReport report = mc_risk_tail(config);
  const bool timing = opt.has("timing");
  Emit(opt, out, to_csv(report, timing), to_json(report, timing));
  return AnyViolated(report.reports) ? kExitViolated : kExitOk;
}

int RunExpect(const Options& opt, std::ostream& out) {
  const ExpectationResult result = mc_expectation(opt.experiment());
  const bool timing = opt.has("timing");
  Emit(opt, out, to_csv(result, timing), to_json(result, timing));
  const bool violated =
      std::any_of(result.reports.begin(), result.reports.end(),
                  [](const ExpectationReport& r) { return r.verdict == Verdict::kViolated; });
  return violated ? kExitViolated : kExitOk;
}

int RunLower(const Options& opt, std::ostream& out) {
  const std::string mode_text = opt.str("mode", "conf-indep");
  LowerBoundMode mode;
  if (mode_text == "conf-indep") {
    mode = LowerBoundMode::kConfIndependent;
  } else if (mode_text == "two-point") {
    mode = LowerBoundMode::kTwoPoint;
  } else {
    throw ValidationError("--mode must be conf-indep or two-point");
  }
  const LowerBoundCheck check = check_lower_bound_construction(
      as_function(opt.spec()), opt.count("n"),
      static_cast<std::size_t>(opt.count("d")), opt.real("delta"),
      opt.real("kappa", 1.0), mode);
  Emit(opt, out, to_csv(check), to_json(check));
  return check.satisfied ? kExitOk : kExitViolated;
}

int RunOracle(const Options& opt, std::ostream& out) {
  const ProbVector p = opt.distribution();
  const std::uint64_t n = opt.count("n");
  const EstimatorSpec spec = opt.spec();
  const ExactFunctionals f =
      exact_functionals(p, n, spec, opt.real("cap", kDefaultCompositionCap));
  std::optional<BoundId> bound;
  if (std::holds_alternative<spec::Laplace>(spec)) bound = BoundId::kExpectationLaplace;
  if (std::holds_alternative<spec::Adaptive>(spec)) bound = BoundId::kExpectationAdaptive;
  double rhs = std::numeric_limits<double>::quiet_NaN();
  std::string verdict = "none";
  if (bound) {
    ExperimentConfig c;
    c.distribution = p;
    c.n = n;
    c.spec = spec;
    rhs = bound_value(*bound, bound_params_for(c, *bound)).value;
    verdict = f.expected_kl <= ExtendedReal(rhs) ? "holds" : "violated";
  }
  std::string csv = "key,value\n";
  csv += "expected_kl," + format_real(f.expected_kl.value()) + "\n";
  csv += "expected_missing," + format_real(f.expected_missing) + "\n";
  csv += "expected_distinct," + format_real(f.expected_distinct) + "\n";
  csv += "total_probability," + format_real(f.total_probability) + "\n";
  if (bound) {
    csv += "bound," + std::string(bound_name(*bound)) + "\n";
    csv += "bound_rhs," + format_real(rhs) + "\n";
  }
  csv += "verdict," + verdict + "\n";
  if (opt.has("out")) {
    WriteFile(opt.str("out"), f.risk_distribution.to_csv());
    out << csv;
  } else {
    out << csv;
  }
  if (opt.has("json")) WriteFile(opt.str("json"), oracle_json(f, rhs, verdict));
  return verdict == "violated" ? kExitViolated : kExitOk;
}

int RunRegime(const Options& opt, std::ostream& out) {
  ExperimentConfig base;
  base.distribution = opt.distribution();
  base.spec = opt.spec();
  base.trials = opt.count("trials", 1000);
  base.master_seed = opt.count("seed", 0);
  base.workers = static_cast<unsigned>(opt.count("workers", 0));
  base.bound_ids = opt.bounds();
  std::vector<std::uint64_t> n_grid;
  for (const std::string& item : SplitList(opt.str("n-grid"))) {
    n_grid.push_back(Options::ToCount("n-grid", parse_real(item)));
  }
  std::vector<double> delta_grid;
  for (const std::string& item : SplitList(opt.str("delta-grid"))) {
    delta_grid.push_back(parse_real(item));
  }
  const std::vector<RegimeCell> cells = regime_map(base, n_grid, delta_grid);
  Emit(opt, out, regime_csv(base, cells), regime_json(base, cells));
  for (const RegimeCell& cell : cells) {
    if (AnyViolated(cell.reports)) return kExitViolated;
  }
  return kExitOk;
}

int Dispatch(const std::string& command, const Options& opt, std::ostream& out) {
  if (command == "estimate") return RunEstimate(opt, out);
  if (command == "profile") return RunProfile(opt, out);
  if (command == "tail") return RunTail(opt, out, false);
  if (command == "missing") return RunTail(opt, out, true);
  if (command == "expect") return RunExpect(opt, out);
  if (command == "lower") return RunLower(opt, out);
  if (command == "oracle") return RunOracle(opt, out);
  if (command == "regime") return RunRegime(opt, out);
  throw ValidationError("unknown command '" + command + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Discrete distribution estimation under KL loss", "kldist");
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, bool> switches;
  for (const Command& cmd : Commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    auto& store = raw[cmd.name];
    for (const std::string& flag : cmd.flags) {
      if (flag == "timing") {
        sub->add_flag("--timing", switches[cmd.name], HelpFor(flag));
      } else {
        sub->add_option("--" + flag, store[flag], HelpFor(flag));
      }
    }
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  try {
    for (const Command& cmd : Commands()) {
      CLI::App* sub = app.get_subcommand(cmd.name);
      if (!sub->parsed()) continue;
      Settings settings;
      if (sub->count("--config") > 0) {
        settings = LoadConfig(raw[cmd.name]["config"], cmd.name, cmd.flags);
      }
      for (const std::string& flag : cmd.flags) {
        if (sub->count("--" + flag) == 0) continue;
        settings[flag] = flag == "timing" ? "true" : raw[cmd.name][flag];
      }
      if (settings.contains("dump-config")) {
        WriteFile(settings["dump-config"], DumpConfig(cmd.name, settings));
      }
      return Dispatch(cmd.name, Options(settings), out);
    }
    err << "kldist: no command given\n";
    return kExitError;
  } catch (const CapExceededError& e) {
    err << "kldist: size cap exceeded: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "kldist: error: " << e.what() << "\n";
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace kldist::cli
