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

// Locally private least squares with per-coordinate Bayesian guarantees.
//
// Each user packs x = [z; l] (label last) and sends two independent layered
// reports at budget c / 2. The server only sees those reports and minimises
// the two-copy surrogate
//   f^(theta) = (1/2n) sum_i (theta' z1_i z2_i' theta - 2 theta' l1_i z2_i),
// which is unbiased for the empirical risk up to a theta-free constant.

#ifndef BCDP_REGRESSION_H_
#define BCDP_REGRESSION_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "bcdp/calibration.h"
#include "bcdp/mechanisms.h"

namespace bcdp {

struct RegressionDataset {
  Eigen::MatrixXd features;  // n x (d - 1), entries in [-1, 1]
  Eigen::VectorXd labels;    // n, entries in [-1, 1]

  Eigen::Index num_users() const { return labels.size(); }
  // Dimension of the packed vector [z; l].
  Eigen::Index packed_dim() const { return features.cols() + 1; }
};

absl::Status ValidateDataset(const RegressionDataset& data);

// One user per line, d values separated by commas or whitespace, label last.
// Blank lines and '#' comments are ignored.
absl::StatusOr<RegressionDataset> ParseDataset(absl::string_view text);
absl::StatusOr<RegressionDataset> ReadDatasetFile(const std::string& path);

// Reports of every user, one row per user, packed as [z^; l^].
struct PrivatizedPairs {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
};

struct SurrogateObjective {
  Eigen::MatrixXd a;  // (1/n) sum z1 z2'
  Eigen::VectorXd b;  // (1/n) sum l1 z2
};

// Theta = closed l2 ball of radius `radius`.
struct FeasibleSet {
  double radius = 1.0;

  Eigen::VectorXd Project(const Eigen::VectorXd& theta) const;
};

// Ball covering every theta with coordinates in [-1, 1].
inline FeasibleSet DefaultFeasibleSet(Eigen::Index feature_dim) {
  return FeasibleSet{.radius = std::sqrt(static_cast<double>(feature_dim))};
}

// Two conditionally independent layered reports per user at budget c / 2,
// where `budget` is calibrated for the packed d-dimensional vector. User i
// draws from the stream DeriveSeed(seed, {i}).
absl::StatusOr<PrivatizedPairs> PrivatizePairs(const RegressionDataset& data,
                                               const CoordinateBudget& budget,
                                               const VectorChannel& channel,
                                               std::uint64_t seed);

absl::StatusOr<SurrogateObjective> BuildSurrogate(const PrivatizedPairs& pairs);

// Exact objective of the clean data (same quadratic form, no noise).
SurrogateObjective ExactObjective(const RegressionDataset& data);

double SurrogateValue(const SurrogateObjective& s, const Eigen::VectorXd& theta);

// (1/2)(A + A') theta - b.
Eigen::VectorXd SurrogateGradient(const SurrogateObjective& s,
                                  const Eigen::VectorXd& theta);

struct OptResult {
  Eigen::VectorXd theta;
  double value = 0.0;
  // Frank-Wolfe gap <g, theta> + R |g| at the returned iterate. For a
  // positive semidefinite surrogate it bounds f^(theta) - min f^.
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  // Smallest eigenvalue of the symmetrised surrogate; negative means the
  // problem is nonconvex and `gap` is only a stationarity measure.
  double min_eigenvalue = 0.0;
  bool indefinite = false;
};

// Projected gradient descent on the symmetrised surrogate with step 1/L,
// L = 1.1 x power-iteration estimate of the spectral norm. Stops when the
// Frank-Wolfe gap is <= accuracy or after `max_iterations` (default 10 n)
// and returns the best iterate by surrogate value.
absl::StatusOr<OptResult> Optimize(const SurrogateObjective& s,
                                   const FeasibleSet& feasible, double accuracy,
                                   int max_iterations);

// Empirical risk (1/2n) sum (theta' z - l)^2.
double EmpiricalRisk(const RegressionDataset& data, const Eigen::VectorXd& theta);

// min over the feasible set of the empirical risk, solved to 1e-12.
absl::StatusOr<double> OptimalRisk(const RegressionDataset& data,
                                   const FeasibleSet& feasible);

struct OlsDiagnostics {
  CoordinateBudget budget;
  OptResult opt;
  std::optional<double> excess_risk;
};

struct OlsResult {
  Eigen::VectorXd theta;
  OlsDiagnostics diagnostics;
};

// Calibrates c from `demand`, privatizes both copies at c / 2, solves the
// surrogate to accuracy 1/n and projects onto the feasible set. When
// `compute_excess_risk` is set the diagnostics carry f(theta^) - f*.
absl::StatusOr<OlsResult> RunPrivateOls(const RegressionDataset& data,
                                        const PrivacyDemand& demand,
                                        const FeasibleSet& feasible,
                                        const VectorChannel& channel,
                                        std::uint64_t seed,
                                        bool compute_excess_risk = false);

}  // namespace bcdp

#endif  // BCDP_REGRESSION_H_
