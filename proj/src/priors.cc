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

#include "bcdp/priors.h"

#include <cmath>
#include <cstddef>
#include <random>

namespace bcdp {

absl::Status ValidateCorrelatedBernoulli(int d, double q) {
  if (d < 1) return absl::InvalidArgumentError("prior dimension must be >= 1");
  if (!(q >= 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError("correlation q must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<DiscretePrior> CorrelatedBernoulliPrior(int d, double q) {
  if (absl::Status s = ValidateCorrelatedBernoulli(d, q); !s.ok()) return s;
  if (d > kMaxExactPriorDim) {
    return absl::InvalidArgumentError(
        "exact correlated prior is limited to d <= 12");
  }
  ProductDomain domain(std::vector<int>(d, 2));
  const std::size_t size = domain.num_points();
  std::vector<double> pmf(size, (1.0 - q) * std::ldexp(1.0, -d));
  pmf.front() += 0.5 * q;
  pmf.back() += 0.5 * q;
  return DiscretePrior::Create(std::move(domain), std::move(pmf));
}

std::vector<double> SampleCorrelatedSigns(int d, double q, Rng& rng) {
  std::bernoulli_distribution shared(q);
  std::bernoulli_distribution bit(0.5);
  std::vector<double> x(d);
  if (shared(rng)) {
    const double z = bit(rng) ? 1.0 : -1.0;
    for (double& v : x) v = z;
  } else {
    for (double& v : x) v = bit(rng) ? 1.0 : -1.0;
  }
  return x;
}

}  // namespace bcdp
