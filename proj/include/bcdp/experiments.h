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

// Monte Carlo experiments behind the `mean-sim` and `ols-sim` subcommands.
//
// Randomness is split by counter: with root seed s, grid index g and trial t,
//   data shared by a batch   DeriveSeed(s, {g, kDataStream})
//   data of a single trial   DeriveSeed(s, {g, t, kDataStream})
//   user u, mechanism m      DeriveSeed(s, {g, t, kMechanismStream + m, u})
// so outputs are a pure function of (config, seed) and adding trials or
// threads never changes existing rows.

#ifndef BCDP_EXPERIMENTS_H_
#define BCDP_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace bcdp {

inline constexpr std::uint64_t kDataStream = 0;
inline constexpr std::uint64_t kMechanismStream = 1;

inline constexpr char kBcdpTag[] = "bcdp";
inline constexpr char kBaselineTag[] = "ldp-baseline";
inline constexpr char kIdentityTag[] = "identity";

// zeta either fixed or (1 + q) / 2 per grid point.
struct ZetaPolicy {
  bool heuristic = true;
  double value = 1.0;

  double For(double q) const;
};

struct MeanExperimentConfig {
  int d = 10;
  int n = 2000;
  int trials = 200;
  double epsilon = 2.0;
  std::vector<double> delta = {0.2, 0.2, 2, 2, 2, 2, 2, 2, 2, 2};
  std::vector<double> q_grid = {0.0, 0.25, 0.5, 0.75, 0.99};
  ZetaPolicy zeta;
  std::uint64_t seed = 0;
  // Draw users i.i.d. uniform on {-1, 1}^d instead of from the prior.
  bool iid_data = false;
  // Fresh users for every trial; by default all trials at one q share them.
  bool redraw_data = false;
  // 0 picks the hardware concurrency.
  int threads = 0;
};

struct OlsExperimentConfig {
  int d = 5;  // packed dimension: d - 1 features and the label
  std::vector<int> n_grid = {500, 2000, 5000};
  int trials = 50;
  double epsilon = 2.0;
  std::vector<double> delta = {0.5, 0.5, 2, 2, 2};
  double q = 0.0;
  ZetaPolicy zeta;
  // Defaults to theta*_j = (-1)^j / (d - 1).
  std::optional<std::vector<double>> theta_star;
  std::uint64_t seed = 0;
  // Also run every trial through the non-private identity channel.
  bool identity_debug = false;
  int threads = 0;
};

absl::Status ValidateMeanConfig(const MeanExperimentConfig& config);
absl::Status ValidateOlsConfig(const OlsExperimentConfig& config);

std::vector<double> DefaultThetaStar(int d);

// One trial outcome. `key` is q for mean-sim and n for ols-sim.
struct TrialRecord {
  double key = 0.0;
  std::string mechanism;
  int trial = 0;
  double value = 0.0;
};

struct TrialSummary {
  double key = 0.0;
  std::string mechanism;
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;   // ordered by (key, mechanism, trial)
  std::vector<TrialSummary> summary;  // ordered by (key, mechanism)
};

// Linear-interpolation sample quantile (type 7). `values` must be non-empty.
double Quantile(std::span<const double> values, double p);

// Groups consecutive records sharing (key, mechanism).
std::vector<TrialSummary> Summarize(std::span<const TrialRecord> records);

// Squared l2 error of both estimators against the users' empirical mean.
absl::StatusOr<ExperimentResult> RunMeanExperiment(
    const MeanExperimentConfig& config);

// Excess empirical risk of the private estimate per n (and of the identity
// channel when requested).
absl::StatusOr<ExperimentResult> RunOlsExperiment(
    const OlsExperimentConfig& config);

// CSV with header `<key_name>,mechanism,trial,<value_name>`.
std::string FormatRawCsv(std::span<const TrialRecord> records,
                         const std::string& key_name,
                         const std::string& value_name);
// CSV with header `<key_name>,mechanism,median,p25,p75`.
std::string FormatSummaryCsv(std::span<const TrialSummary> summary,
                             const std::string& key_name);

}  // namespace bcdp

#endif  // BCDP_EXPERIMENTS_H_
