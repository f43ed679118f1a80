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

#include "bcdp/fixtures.h"

#include <vector>

namespace bcdp {

absl::StatusOr<FiniteMechanism> TableMechanism(double a, double b, double c) {
  for (double v : {a, b, c}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      return absl::InvalidArgumentError("table entries must lie in [0, 1]");
    }
  }
  // Rows in domain order (x1, x2) = (0,0), (0,1), (1,0), (1,1).
  const double p_one[4] = {a, 0.0, b, c};
  std::vector<double> kernel;
  for (double p : p_one) {
    kernel.push_back(1.0 - p);
    kernel.push_back(p);
  }
  return FiniteMechanism::Create(ProductDomain({2, 2}), 2, std::move(kernel));
}

FiniteMechanism XorMechanism() {
  ProductDomain domain({2, 2, 2});
  std::vector<double> kernel(domain.num_points() * 4, 0.0);
  for (std::size_t x = 0; x < domain.num_points(); ++x) {
    const int x1 = domain.Coordinate(x, 0);
    const int x2 = domain.Coordinate(x, 1);
    const int x3 = domain.Coordinate(x, 2);
    kernel[x * 4 + 2 * (x1 ^ x2) + x3] += 0.5;
    kernel[x * 4 + 2 * x2 + (x1 ^ x3)] += 0.5;
  }
  return *FiniteMechanism::Create(std::move(domain), 4, std::move(kernel));
}

absl::StatusOr<DiscretePrior> IndependentBernoulliPrior(int d, double p) {
  if (d < 1) return absl::InvalidArgumentError("need d >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError("p must lie in [0, 1]");
  }
  ProductDomain domain(std::vector<int>(d, 2));
  std::vector<double> pmf(domain.num_points());
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    double mass = 1.0;
    for (int i = 0; i < d; ++i) mass *= domain.Coordinate(x, i) ? p : 1.0 - p;
    pmf[x] = mass;
  }
  return DiscretePrior::Create(std::move(domain), std::move(pmf));
}

}  // namespace bcdp
