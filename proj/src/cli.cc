// Copyright 2026 The BCDP Authors
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

#include "bcdp/cli.h"

#include <filesystem>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "bcdp/audit.h"
#include "bcdp/calibration.h"
#include "bcdp/config.h"
#include "bcdp/experiments.h"
#include "bcdp/finite_mechanism.h"
#include "bcdp/fixtures.h"

namespace bcdp {

namespace {

constexpr char kHeuristic[] = "heuristic";

// Shortest of %.15g / %.17g that reads back to the same double.
std::string FormatDouble(double v) {
  std::string s = absl::StrFormat("%.15g", v);
  double back = 0.0;
  if (absl::SimpleAtod(s, &back) && back == v) return s;
  return absl::StrFormat("%.17g", v);
}

std::string JoinDoubles(const std::vector<double>& v) {
  return absl::StrJoin(v, ",", [](std::string* out, double x) {
    out->append(FormatDouble(x));
  });
}

// Options of one subcommand that may also come from the config file.
class KeyedOptions {
 public:
  explicit KeyedOptions(CLI::App* app) : app_(app) {}

  void Value(const std::string& key, const std::string& help) {
    options_[key] = app_->add_option("--" + key, values_[key], help);
  }
  void Flag(const std::string& key, const std::string& help) {
    options_[key] = app_->add_flag("--" + key, help);
    flags_.push_back(key);
  }

  // File entries overridden by the flags given on the command line.
  absl::StatusOr<ConfigMap> Resolve(const std::string& config_path) const {
    ConfigMap merged;
    if (!config_path.empty()) {
      absl::StatusOr<ConfigMap> file = ReadConfigFile(config_path);
      if (!file.ok()) return file.status();
      for (const auto& [key, value] : *file) {
        if (!options_.contains(key)) {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown config key '", key, "' in ", config_path));
        }
      }
      merged = *std::move(file);
    }
    for (const auto& [key, option] : options_) {
      if (option->count() == 0) continue;
      const bool is_flag =
          std::find(flags_.begin(), flags_.end(), key) != flags_.end();
      merged[key] = is_flag ? "true" : values_.at(key);
    }
    return merged;
  }

 private:
  CLI::App* app_;
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
  std::vector<std::string> flags_;
};

// Typed accessors that leave `target` untouched when `key` is absent.
class Reader {
 public:
  explicit Reader(const ConfigMap& map) : map_(map) {}

  template <typename T, typename Parser>
  absl::Status Get(const std::string& key, Parser parse, T& target) const {
    auto it = map_.find(key);
    if (it == map_.end()) return absl::OkStatus();
    auto parsed = parse(key, it->second);
    if (!parsed.ok()) return parsed.status();
    target = *std::move(parsed);
    return absl::OkStatus();
  }

  absl::Status Zeta(ZetaPolicy& target) const {
    auto it = map_.find("zeta");
    if (it == map_.end()) return absl::OkStatus();
    if (it->second == kHeuristic) {
      target = ZetaPolicy{.heuristic = true};
      return absl::OkStatus();
    }
    absl::StatusOr<double> v = ParseDouble("zeta", it->second);
    if (!v.ok()) return v.status();
    target = ZetaPolicy{.heuristic = false, .value = *v};
    return absl::OkStatus();
  }

 private:
  const ConfigMap& map_;
};

#define BCDP_RETURN_IF_ERROR(expr)            \
  do {                                        \
    if (absl::Status _s = (expr); !_s.ok()) { \
      return _s;                              \
    }                                         \
  } while (false)

std::string ZetaText(const ZetaPolicy& zeta) {
  return zeta.heuristic ? kHeuristic : FormatDouble(zeta.value);
}

absl::StatusOr<MeanExperimentConfig> BuildMeanConfig(const ConfigMap& map,
                                                     std::uint64_t seed) {
  MeanExperimentConfig c;
  c.seed = seed;
  Reader r(map);
  BCDP_RETURN_IF_ERROR(r.Get("d", ParseInt, c.d));
  BCDP_RETURN_IF_ERROR(r.Get("n", ParseInt, c.n));
  BCDP_RETURN_IF_ERROR(r.Get("trials", ParseInt, c.trials));
  BCDP_RETURN_IF_ERROR(r.Get("epsilon", ParseDouble, c.epsilon));
  BCDP_RETURN_IF_ERROR(r.Get("delta", ParseDoubleList, c.delta));
  BCDP_RETURN_IF_ERROR(r.Get("q", ParseDoubleList, c.q_grid));
  BCDP_RETURN_IF_ERROR(r.Zeta(c.zeta));
  BCDP_RETURN_IF_ERROR(r.Get("iid-data", ParseBool, c.iid_data));
  BCDP_RETURN_IF_ERROR(r.Get("redraw-data", ParseBool, c.redraw_data));
  BCDP_RETURN_IF_ERROR(r.Get("threads", ParseInt, c.threads));
  BCDP_RETURN_IF_ERROR(ValidateMeanConfig(c));
  return c;
}

absl::StatusOr<OlsExperimentConfig> BuildOlsConfig(const ConfigMap& map,
                                                   std::uint64_t seed) {
  OlsExperimentConfig c;
  c.seed = seed;
  Reader r(map);
  BCDP_RETURN_IF_ERROR(r.Get("d", ParseInt, c.d));
  BCDP_RETURN_IF_ERROR(r.Get("n", ParseIntList, c.n_grid));
  BCDP_RETURN_IF_ERROR(r.Get("trials", ParseInt, c.trials));
  BCDP_RETURN_IF_ERROR(r.Get("epsilon", ParseDouble, c.epsilon));
  BCDP_RETURN_IF_ERROR(r.Get("delta", ParseDoubleList, c.delta));
  BCDP_RETURN_IF_ERROR(r.Get("q", ParseDouble, c.q));
  BCDP_RETURN_IF_ERROR(r.Zeta(c.zeta));
  if (map.contains("theta-star")) {
    std::vector<double> theta;
    BCDP_RETURN_IF_ERROR(r.Get("theta-star", ParseDoubleList, theta));
    c.theta_star = std::move(theta);
  }
  BCDP_RETURN_IF_ERROR(r.Get("identity", ParseBool, c.identity_debug));
  BCDP_RETURN_IF_ERROR(r.Get("threads", ParseInt, c.threads));
  BCDP_RETURN_IF_ERROR(ValidateOlsConfig(c));
  return c;
}

// Fully resolved settings, defaults included. Thread count is left out on
// purpose since it never affects results.
ConfigMap Describe(const MeanExperimentConfig& c) {
  return {{"d", absl::StrCat(c.d)},
          {"n", absl::StrCat(c.n)},
          {"trials", absl::StrCat(c.trials)},
          {"epsilon", FormatDouble(c.epsilon)},
          {"delta", JoinDoubles(c.delta)},
          {"q", JoinDoubles(c.q_grid)},
          {"zeta", ZetaText(c.zeta)},
          {"iid-data", c.iid_data ? "true" : "false"},
          {"redraw-data", c.redraw_data ? "true" : "false"}};
}

ConfigMap Describe(const OlsExperimentConfig& c) {
  return {{"d", absl::StrCat(c.d)},
          {"n", absl::StrJoin(c.n_grid, ",")},
          {"trials", absl::StrCat(c.trials)},
          {"epsilon", FormatDouble(c.epsilon)},
          {"delta", JoinDoubles(c.delta)},
          {"q", FormatDouble(c.q)},
          {"zeta", ZetaText(c.zeta)},
          {"theta-star", JoinDoubles(c.theta_star.value_or(DefaultThetaStar(c.d)))},
          {"identity", c.identity_debug ? "true" : "false"}};
}

absl::Status WriteOutputs(const std::string& dir, const std::string& command,
                          std::uint64_t seed, const ConfigMap& settings,
                          const std::string& raw, const std::string& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create output directory ", dir, ": ", ec.message()));
  }
  const std::filesystem::path base(dir);
  std::string manifest = absl::StrCat("version = ", kVersion, "\ncommand = ",
                                      command, "\nseed = ", seed, "\n");
  absl::StrAppend(&manifest, FormatConfig(settings));
  BCDP_RETURN_IF_ERROR(WriteTextFile((base / "raw.csv").string(), raw));
  BCDP_RETURN_IF_ERROR(WriteTextFile((base / "summary.csv").string(), summary));
  return WriteTextFile((base / "manifest.txt").string(), manifest);
}

int Fail(std::ostream& err, int code, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return code;
}

int RunCalibrate(const ConfigMap& map, std::ostream& out, std::ostream& err) {
  PrivacyDemand demand;
  ZetaPolicy zeta;
  Reader r(map);
  absl::Status s = r.Get("epsilon", ParseDouble, demand.epsilon);
  if (s.ok()) s = r.Get("delta", ParseDoubleList, demand.delta);
  if (s.ok()) s = r.Get("q", ParseDouble, demand.q);
  if (s.ok()) s = r.Zeta(zeta);
  if (s.ok() && !map.contains("epsilon")) {
    s = absl::InvalidArgumentError("--epsilon is required");
  }
  if (s.ok() && !map.contains("delta")) {
    s = absl::InvalidArgumentError("--delta is required");
  }
  if (!s.ok()) return Fail(err, kExitConfigError, s);
  demand.zeta = zeta.For(demand.q);
  absl::StatusOr<CoordinateBudget> budget = CalibrateBudgets(demand);
  if (!budget.ok()) return Fail(err, kExitConfigError, budget.status());
  out << "c: "
      << absl::StrJoin(budget->InCallerOrder(), ",",
                       [](std::string* o, double x) {
                         absl::StrAppendFormat(o, "%.17g", x);
                       })
      << "\n";
  return kExitOk;
}

int RunAudit(const std::string& kernel_path, const std::string& prior_path,
             const std::string& fixture_dir, std::ostream& out,
             std::ostream& err) {
  if (!fixture_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(fixture_dir, ec);
    if (ec) {
      return Fail(err, kExitRuntimeError,
                  absl::UnavailableError(ec.message()));
    }
    const std::filesystem::path base(fixture_dir);
    absl::StatusOr<FiniteMechanism> table = TableMechanism(0.5, 0.5, 0.5);
    absl::StatusOr<DiscretePrior> bern = IndependentBernoulliPrior(2);
    if (!table.ok()) return Fail(err, kExitRuntimeError, table.status());
    if (!bern.ok()) return Fail(err, kExitRuntimeError, bern.status());
    for (const auto& [name, text] :
         {std::pair{"table_mechanism.tsv", FormatKernel(*table)},
          std::pair{"xor_mechanism.tsv", FormatKernel(XorMechanism())},
          std::pair{"bernoulli2.tsv", FormatPrior(*bern)}}) {
      absl::Status s = WriteTextFile((base / name).string(), text);
      if (!s.ok()) return Fail(err, kExitRuntimeError, s);
      out << (base / name).string() << "\n";
    }
    return kExitOk;
  }
  if (kernel_path.empty()) {
    return Fail(err, kExitConfigError,
                absl::InvalidArgumentError("--kernel or --emit-fixtures is required"));
  }
  absl::StatusOr<FiniteMechanism> mechanism = ReadKernelFile(kernel_path);
  if (!mechanism.ok()) return Fail(err, kExitConfigError, mechanism.status());
  DiscretePrior prior = UniformPrior(mechanism->domain());
  if (!prior_path.empty()) {
    absl::StatusOr<DiscretePrior> p = ReadPriorFile(prior_path);
    if (!p.ok()) return Fail(err, kExitConfigError, p.status());
    prior = *std::move(p);
  }
  absl::StatusOr<AuditReport> report = Audit(*mechanism, prior);
  if (!report.ok()) {
    const int code = absl::IsInvalidArgument(report.status()) ? kExitConfigError
                                                              : kExitRuntimeError;
    return Fail(err, code, report.status());
  }
  out << FormatAuditReport(*report);
  return kExitOk;
}

template <typename Config, typename Builder, typename Runner>
int RunSimulation(const std::string& command, const ConfigMap& map,
                  std::uint64_t seed, const std::string& out_dir,
                  const std::string& key_name, const std::string& value_name,
                  Builder build, Runner run, std::ostream& out,
                  std::ostream& err) {
  absl::StatusOr<Config> config = build(map, seed);
  if (!config.ok()) return Fail(err, kExitConfigError, config.status());
  absl::StatusOr<ExperimentResult> result = run(*config);
  if (!result.ok()) return Fail(err, kExitRuntimeError, result.status());
  const std::string summary = FormatSummaryCsv(result->summary, key_name);
  absl::Status s = WriteOutputs(out_dir, command, seed, Describe(*config),
                                FormatRawCsv(result->records, key_name, value_name),
                                summary);
  if (!s.ok()) return Fail(err, kExitRuntimeError, s);
  out << summary;
  return kExitOk;
}

}  // namespace

int CliEntry(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Bayesian coordinate differential privacy toolkit", "bcdp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CLI::App* calibrate = app.add_subcommand("calibrate", "Calibrate per-coordinate budgets");
  std::string calibrate_config;
  calibrate->add_option("--config", calibrate_config, "Key-value config file");
  KeyedOptions calibrate_opts(calibrate);
  calibrate_opts.Value("epsilon", "Overall LDP bound");
  calibrate_opts.Value("delta", "Per-coordinate BCDP targets, comma separated");
  calibrate_opts.Value("q", "Conditional TV bound of the prior (default 0)");
  calibrate_opts.Value("zeta", "Number in [0, 1] or 'heuristic' (default)");

  CLI::App* audit = app.add_subcommand("audit", "Exact audit of a finite mechanism");
  std::string kernel_path, prior_path, fixture_dir;
  audit->add_option("--kernel", kernel_path, "Kernel text file");
  audit->add_option("--prior", prior_path, "Prior text file (default uniform)");
  audit->add_option("--emit-fixtures", fixture_dir,
                    "Write example kernel and prior files to this directory");

  struct SimFlags {
    std::string config;
    std::uint64_t seed = 0;
    std::string out = ".";
  };
  auto add_sim = [](CLI::App* sub, SimFlags& flags) {
    sub->add_option("--config", flags.config, "Key-value config file");
    sub->add_option("--seed", flags.seed, "Root seed")->required();
    sub->add_option("--out", flags.out, "Output directory (default .)");
  };

  CLI::App* mean = app.add_subcommand("mean-sim", "Mean-estimation experiment");
  SimFlags mean_flags;
  add_sim(mean, mean_flags);
  KeyedOptions mean_opts(mean);
  mean_opts.Value("d", "Dimension");
  mean_opts.Value("n", "Users per trial");
  mean_opts.Value("trials", "Trials per q");
  mean_opts.Value("epsilon", "Overall LDP bound");
  mean_opts.Value("delta", "Per-coordinate targets");
  mean_opts.Value("q", "Correlation grid");
  mean_opts.Value("zeta", "Number in [0, 1] or 'heuristic'");
  mean_opts.Flag("iid-data", "Draw users i.i.d. uniform instead of from the prior");
  mean_opts.Flag("redraw-data", "Draw fresh users for every trial");
  mean_opts.Value("threads", "Worker threads (0 = all cores)");

  CLI::App* ols = app.add_subcommand("ols-sim", "Private least-squares experiment");
  SimFlags ols_flags;
  add_sim(ols, ols_flags);
  KeyedOptions ols_opts(ols);
  ols_opts.Value("d", "Packed dimension (features + label)");
  ols_opts.Value("n", "Grid of user counts");
  ols_opts.Value("trials", "Trials per n");
  ols_opts.Value("epsilon", "Overall LDP bound");
  ols_opts.Value("delta", "Per-coordinate targets, label last");
  ols_opts.Value("q", "Feature correlation");
  ols_opts.Value("zeta", "Number in [0, 1] or 'heuristic'");
  ols_opts.Value("theta-star", "True coefficients (d - 1 entries)");
  ols_opts.Flag("identity", "Also run the non-private identity channel");
  ols_opts.Value("threads", "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (calibrate->parsed()) {
    absl::StatusOr<ConfigMap> map = calibrate_opts.Resolve(calibrate_config);
    if (!map.ok()) return Fail(err, kExitConfigError, map.status());
    return RunCalibrate(*map, out, err);
  }
  if (audit->parsed()) {
    return RunAudit(kernel_path, prior_path, fixture_dir, out, err);
  }
  if (mean->parsed()) {
    absl::StatusOr<ConfigMap> map = mean_opts.Resolve(mean_flags.config);
    if (!map.ok()) return Fail(err, kExitConfigError, map.status());
    return RunSimulation<MeanExperimentConfig>(
        "mean-sim", *map, mean_flags.seed, mean_flags.out, "q", "mse",
        BuildMeanConfig, RunMeanExperiment, out, err);
  }
  absl::StatusOr<ConfigMap> map = ols_opts.Resolve(ols_flags.config);
  if (!map.ok()) return Fail(err, kExitConfigError, map.status());
  return RunSimulation<OlsExperimentConfig>(
      "ols-sim", *map, ols_flags.seed, ols_flags.out, "n", "excess_risk",
      BuildOlsConfig, RunOlsExperiment, out, err);
}

}  // namespace bcdp
