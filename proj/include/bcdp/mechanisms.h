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

#ifndef BCDP_MECHANISMS_H_
#define BCDP_MECHANISMS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bcdp/finite_mechanism.h"
#include "bcdp/random.h"

namespace bcdp {

// One call of an LDP channel on a vector in the l2 ball of radius `radius`.
struct LdpChannelSpec {
  double alpha = 0.0;
  int dim = 1;
  double radius = 1.0;
};

// Output norm B of the l2-ball channel,
//   B = sqrt(pi) * dim * radius * (e^a + 1) / (e^a - 1)
//       * Gamma((dim + 1) / 2) / (2 Gamma(dim / 2 + 1)),
// i.e. radius / ((2 P(K = 1) - 1) E|U_1|) for U uniform on the unit sphere,
// which is the value that makes the channel unbiased. For dim = 1 this is
// radius * (e^a + 1) / (e^a - 1). Evaluated with log-gamma differences.
// alpha = 0 is rejected: B is unbounded and callers skip zero-budget queries.
absl::StatusOr<double> BallChannelBound(const LdpChannelSpec& spec);

// Minimax-optimal alpha-LDP channel for the l2 ball. The output is uniform
// on the hemisphere {|z| = B, (2K - 1) z . v~ > 0} where
// K ~ Bern(e^a / (e^a + 1)), S ~ Bern(1/2 + |v| / (2r)) and
// v~ = (2S - 1) r v / |v|. E[Z | v] = v.
//
// v = 0 uses the first basis vector as direction; since S ~ Bern(1/2) the
// output is then uniform on the whole sphere.
absl::StatusOr<std::vector<double>> BallChannelSample(std::span<const double> v,
                                                      const LdpChannelSpec& spec,
                                                      Rng& rng);

// Vector channel interface consumed by the layered mean mechanism.
class VectorChannel {
 public:
  virtual ~VectorChannel() = default;

  virtual absl::StatusOr<std::vector<double>> Privatize(
      std::span<const double> v, double alpha, double radius,
      Rng& rng) const = 0;

  // False for debugging channels that release their input.
  virtual bool is_private() const = 0;
};

class BallChannel final : public VectorChannel {
 public:
  absl::StatusOr<std::vector<double>> Privatize(std::span<const double> v,
                                                double alpha, double radius,
                                                Rng& rng) const override;
  bool is_private() const override { return true; }
};

// Releases its input unchanged. Offers no privacy; used to check that the
// estimators reduce to their exact counterparts.
class IdentityChannel final : public VectorChannel {
 public:
  absl::StatusOr<std::vector<double>> Privatize(std::span<const double> v,
                                                double alpha, double radius,
                                                Rng& rng) const override;
  bool is_private() const override { return false; }
};

// k-ary randomized response: P(y = x) = e^a / (e^a + k - 1), every other
// output 1 / (e^a + k - 1). Single-coordinate domain {0, ..., k - 1}.
absl::StatusOr<FiniteMechanism> RandomizedResponseKernel(int k, double alpha);

}  // namespace bcdp

#endif  // BCDP_MECHANISMS_H_
