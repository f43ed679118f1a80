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

// Exact privacy levels of finite mechanism-prior pairs.
//
// All levels are extended reals (+inf allowed). Every quantity that the
// definitions state over arbitrary input events and output sets is computed
// over singletons only:
//
//  * Output sets. For probability vectors p, p' and any set R,
//    p(R) / p'(R) = sum_y p(y) / sum_y p'(y) <= max_y p(y) / p'(y),
//    so the supremum over R is attained at a single output.
//  * Input events. A conditional law given x_i in S is the mixture of the
//    singleton conditionals x_i = s, s in S, weighted by prior mass. A ratio
//    of two mixtures is bounded by the largest ratio of their components,
//    and the bound is attained by singletons.
//
// Outputs with zero probability under both compared laws are skipped; an
// output that is possible under one law and impossible under the other
// makes the level +inf.

#ifndef BCDP_AUDIT_H_
#define BCDP_AUDIT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "bcdp/finite_mechanism.h"

namespace bcdp {

// Tolerance for equality assertions on audited levels.
inline constexpr double kAuditTolerance = 1e-9;

struct AuditReport {
  double ldp_level = 0.0;
  std::vector<double> cdp_levels;
  double bdp_level = 0.0;
  std::vector<double> bcdp_levels;
  std::vector<double> tv_bounds;
};

// max over outputs and input pairs of log(mu_x(y) / mu_x'(y)).
double ExactLdpLevel(const FiniteMechanism& mechanism);

// Level of coordinate i: same maximum restricted to pairs that agree
// outside coordinate i.
std::vector<double> ExactCdpLevels(const FiniteMechanism& mechanism);

// LDP level restricted to inputs with positive prior mass.
absl::StatusOr<double> ExactBdpLevel(const FiniteMechanism& mechanism,
                                     const DiscretePrior& prior);

// Per-coordinate Bayesian levels: max over outputs and positive-mass values
// s, s' of coordinate i of log(P(y | x_i = s) / P(y | x_i = s')). A
// coordinate with a single positive-mass value has level 0.
absl::StatusOr<std::vector<double>> ExactBcdpLevels(
    const FiniteMechanism& mechanism, const DiscretePrior& prior);

// Output law P(. | x_i = value), indexed by output. `value` must carry
// positive prior mass.
std::vector<double> ConditionalOutputLaw(const FiniteMechanism& mechanism,
                                         const DiscretePrior& prior,
                                         std::size_t coordinate, int value);

// max over positive-mass values s, s' of TV(pi(x_{-i} | x_i = s),
// pi(x_{-i} | x_i = s')). TV is jointly convex, so set-valued conditions
// cannot exceed the singleton maximum.
double ConditionalTv(const DiscretePrior& prior, std::size_t coordinate);
std::vector<double> ConditionalTvBounds(const DiscretePrior& prior);

// Violating instance of the hypothesis-testing inequality
//   exp(delta_i) * alpha + beta >= 1
// for the test H0: x_i = s against H1: x_i = s' with rejection region {y}.
struct HtWitness {
  std::size_t coordinate = 0;
  int output = 0;
  int value = 0;        // s
  int alt_value = 0;    // s'
  double alpha = 0.0;   // P(y | x_i = s), type I error
  double beta = 0.0;    // 1 - P(y | x_i = s'), type II error
};

struct HtCheckResult {
  bool holds = true;
  std::optional<HtWitness> witness;
};

// Checks the tradeoff at levels `delta` (one per coordinate; +inf always
// passes). Singleton regions and values suffice by the reductions above.
absl::StatusOr<HtCheckResult> HtTradeoffCheck(const FiniteMechanism& mechanism,
                                              const DiscretePrior& prior,
                                              std::span<const double> delta);

// Runs both mechanisms independently on the same input. Output (y1, y2) is
// encoded as y1 * m2.num_outputs() + y2.
absl::StatusOr<FiniteMechanism> ComposeProduct(const FiniteMechanism& m1,
                                               const FiniteMechanism& m2);

// Applies independent single-coordinate channels coordinatewise. Factor j
// must have a one-coordinate domain; the result lives on the product of the
// factor domains with outputs encoded row-major.
absl::StatusOr<FiniteMechanism> TensorProduct(
    std::span<const FiniteMechanism> factors);

// Pushforward of the output through `map` (output y -> map[y]).
// `num_outputs` defaults to max(map) + 1.
absl::StatusOr<FiniteMechanism> Postprocess(
    const FiniteMechanism& mechanism, std::span<const int> map,
    std::optional<int> num_outputs = std::nullopt);

absl::StatusOr<AuditReport> Audit(const FiniteMechanism& mechanism,
                                  const DiscretePrior& prior);

std::string FormatAuditReport(const AuditReport& report);

}  // namespace bcdp

#endif  // BCDP_AUDIT_H_
