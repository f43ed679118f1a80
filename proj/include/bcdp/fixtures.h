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

// Small finite mechanisms and priors used as audit fixtures.

#ifndef BCDP_FIXTURES_H_
#define BCDP_FIXTURES_H_

#include "absl/status/statusor.h"
#include "bcdp/finite_mechanism.h"

namespace bcdp {

// Binary-output mechanism on two bits with P(1 | x1, x2) given by
//   (0,0) -> a, (1,0) -> b, (0,1) -> 0, (1,1) -> c.
// It is never LDP because of the zero entry, yet has finite per-coordinate
// Bayesian levels under an independent prior.
absl::StatusOr<FiniteMechanism> TableMechanism(double a, double b, double c);

// Mechanism on three bits that releases (x1 ^ x2, x3) or (x2, x1 ^ x3) with
// probability 1/2 each. Output (o1, o2) is encoded as 2 * o1 + o2.
FiniteMechanism XorMechanism();

// Independent Bernoulli(p) bits on {0, 1}^d.
absl::StatusOr<DiscretePrior> IndependentBernoulliPrior(int d, double p = 0.5);

}  // namespace bcdp

#endif  // BCDP_FIXTURES_H_
