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

#ifndef BCDP_CALIBRATION_H_
#define BCDP_CALIBRATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace bcdp {

// Tolerance used by the post-hoc safety checks on calibrated budgets.
inline constexpr double kBudgetTolerance = 1e-12;

// User-facing privacy requirements: a global LDP level `epsilon`, one
// Bayesian coordinate level per coordinate (`delta`, +inf meaning "nothing
// beyond epsilon"), the universal conditional-TV bound `q` of the prior and
// the budget split parameter `zeta`.
struct PrivacyDemand {
  double epsilon = 0.0;
  std::vector<double> delta;
  double q = 0.0;
  double zeta = 1.0;
};

absl::Status ValidateDemand(const PrivacyDemand& demand);

// Per-coordinate coordinate-DP budgets produced by CalibrateBudgets.
//
// `c` is stored in internal (sensitivity-ascending) order and is
// non-decreasing. `perm[k]` is the caller coordinate that sits at internal
// position k, so internal vectors map back with out[perm[k]] = in[k].
class CoordinateBudget {
 public:
  CoordinateBudget() = default;
  // Budget already in internal order with the identity permutation.
  explicit CoordinateBudget(std::vector<double> c);
  CoordinateBudget(std::vector<double> c, std::vector<std::size_t> perm);

  std::size_t dim() const { return c_.size(); }
  const std::vector<double>& internal() const { return c_; }
  const std::vector<std::size_t>& perm() const { return perm_; }

  // Largest budget c_d, i.e. the LDP level consumed by one layered report.
  double total() const { return c_.empty() ? 0.0 : c_.back(); }

  // Budgets re-ordered to caller coordinates.
  std::vector<double> InCallerOrder() const;

  // Caller-order vector -> internal order, and back.
  std::vector<double> ToInternal(std::span<const double> caller) const;
  std::vector<double> ToCaller(std::span<const double> internal) const;

  // Same permutation, every budget multiplied by `factor` (>= 0).
  CoordinateBudget Scaled(double factor) const;

 private:
  std::vector<double> c_;
  std::vector<std::size_t> perm_;
};

// Calibrates non-decreasing coordinate budgets that make the layered mean
// mechanism epsilon-LDP and delta-BCDP under a universal TV bound q.
//
// With dt_i = min(delta_i, epsilon) sorted ascending:
//   c_d = min{ log((exp(zeta * dt_1) + q - 1) / q), dt_d }
//   c_i = c_d                                  if c_d <= dt_i
//       = dt_i - log(1 + q * exp(c_d) - q)     otherwise.
// q = 0 takes the first term of c_d as +inf. delta_i = 0 is legal and forces
// c_i = 0 (and, when q > 0, c_d = 0 and therefore c = 0).
absl::StatusOr<CoordinateBudget> CalibrateBudgets(const PrivacyDemand& demand);

// Largest violation of the BCDP feasibility inequality
//   c_i + log(1 + q * exp(c_d) - q) <= delta_i   for every i with c_d > dt_i,
// together with c_d <= min(epsilon, dt_d). Non-positive means feasible.
// `budget` must come from CalibrateBudgets(demand).
double CalibrationSlackViolation(const PrivacyDemand& demand,
                                 const CoordinateBudget& budget);

// BCDP levels implied by coordinate-DP budgets `c` and per-coordinate TV
// bounds `q`:
//   delta_i = c_i + log(1 + q_i * exp(sum_{j != i} c_j) - q_i),
// or, when the mechanism is known to be epsilon-LDP,
//   delta_i = min{ c_i + log(1 + q_i * exp(epsilon) - q_i), epsilon }.
absl::StatusOr<std::vector<double>> CdpToBcdpBound(
    std::span<const double> c, std::span<const double> q,
    std::optional<double> epsilon = std::nullopt);

// Linear relaxation A_delta of the nonlinear CDP -> BCDP constraint:
// A c <= 1 componentwise implies CdpToBcdpBound(c, q)_i <= delta_i.
class FeasibilityMatrix {
 public:
  static absl::StatusOr<FeasibilityMatrix> Create(std::span<const double> delta,
                                                  std::span<const double> q);

  std::size_t dim() const { return dim_; }
  double at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  // True iff A c <= 1 in every row.
  bool IsFeasible(std::span<const double> c) const;
  std::vector<double> Apply(std::span<const double> c) const;

 private:
  FeasibilityMatrix(std::size_t dim, std::vector<double> a)
      : dim_(dim), a_(std::move(a)) {}

  std::size_t dim_ = 0;
  std::vector<double> a_;
};

// Two-group mean estimation rate, without the universal constant: k
// coordinates at level delta and d - k at level epsilon, zeta = 1/2.
absl::StatusOr<double> CorollaryRate(int d, int k, double delta,
                                     double epsilon, double q, int n);

// Heuristic split zeta = (1 + q) / 2.
inline double HeuristicZeta(double q) { return (1.0 + q) / 2.0; }

}  // namespace bcdp

#endif  // BCDP_CALIBRATION_H_
