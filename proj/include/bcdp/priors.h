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

// Correlated Bernoulli prior: with probability q every bit equals one shared
// Bern(1/2) draw, otherwise the bits are i.i.d. Bern(1/2). The conditional
// total variation of the rest given any single bit is exactly q.

#ifndef BCDP_PRIORS_H_
#define BCDP_PRIORS_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bcdp/finite_mechanism.h"
#include "bcdp/random.h"

namespace bcdp {

// Largest dimension for which the exact pmf is materialised.
inline constexpr int kMaxExactPriorDim = 12;

absl::Status ValidateCorrelatedBernoulli(int d, double q);

// Exact pmf over {0,1}^d. Refused for d > kMaxExactPriorDim.
absl::StatusOr<DiscretePrior> CorrelatedBernoulliPrior(int d, double q);

// One draw mapped to {-1, 1}^d by x -> 2x - 1. Arguments must be valid.
std::vector<double> SampleCorrelatedSigns(int d, double q, Rng& rng);

}  // namespace bcdp

#endif  // BCDP_PRIORS_H_
