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

#include "bcdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bcdp {

namespace {

// Inputs may sit on the sphere up to rounding of their norm.
constexpr double kRadiusSlack = 1e-12;

absl::Status ValidateSpec(const LdpChannelSpec& spec) {
  if (std::isnan(spec.alpha) || spec.alpha < 0.0) {
    return absl::InvalidArgumentError("channel alpha must be >= 0");
  }
  if (spec.alpha == 0.0) {
    return absl::InvalidArgumentError("zero-budget channel has unbounded B");
  }
  if (spec.dim < 1) return absl::InvalidArgumentError("channel dim must be >= 1");
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    return absl::InvalidArgumentError("channel radius must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> BallChannelBound(const LdpChannelSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  const double d = spec.dim;
  // (e^a + 1) / (e^a - 1) = coth(a / 2).
  const double odds = 1.0 / std::tanh(spec.alpha / 2.0);
  const double gamma_ratio =
      std::exp(std::lgamma((d + 1.0) / 2.0) - std::lgamma(d / 2.0 + 1.0));
  return 0.5 * std::sqrt(std::numbers::pi) * d * spec.radius * odds * gamma_ratio;
}

absl::StatusOr<std::vector<double>> BallChannelSample(std::span<const double> v,
                                                      const LdpChannelSpec& spec,
                                                      Rng& rng) {
  absl::StatusOr<double> bound = BallChannelBound(spec);
  if (!bound.ok()) return bound.status();
  if (v.size() != static_cast<std::size_t>(spec.dim)) {
    return absl::InvalidArgumentError("input size differs from channel dim");
  }
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  const double norm = std::sqrt(norm_sq);
  if (!(norm <= spec.radius * (1.0 + kRadiusSlack))) {
    return absl::OutOfRangeError("input lies outside the channel's l2 ball");
  }

  std::bernoulli_distribution keep(1.0 / (1.0 + std::exp(-spec.alpha)));
  std::bernoulli_distribution toward(
      std::clamp(0.5 + norm / (2.0 * spec.radius), 0.0, 1.0));
  const bool k = keep(rng);
  const double side = toward(rng) ? 1.0 : -1.0;

  // Only the direction of v~ matters for the halfspace test.
  std::vector<double> dir(v.size(), 0.0);
  if (norm > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) dir[i] = side * v[i] / norm;
  } else {
    dir[0] = side;
  }

  std::normal_distribution<double> gauss;
  std::vector<double> z(v.size());
  double dot = 0.0;
  double z_norm_sq = 0.0;
  do {
    dot = 0.0;
    z_norm_sq = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = gauss(rng);
      dot += z[i] * dir[i];
      z_norm_sq += z[i] * z[i];
    }
  } while (dot == 0.0 || z_norm_sq == 0.0);

  // Reflect into the hemisphere selected by K; reflection preserves
  // uniformity on the sphere.
  const double flip = ((dot > 0.0) == k) ? 1.0 : -1.0;
  const double scale = flip * *bound / std::sqrt(z_norm_sq);
  for (double& zi : z) zi *= scale;
  return z;
}

absl::StatusOr<std::vector<double>> BallChannel::Privatize(
    std::span<const double> v, double alpha, double radius, Rng& rng) const {
  return BallChannelSample(
      v, LdpChannelSpec{.alpha = alpha, .dim = static_cast<int>(v.size()),
                        .radius = radius},
      rng);
}

absl::StatusOr<std::vector<double>> IdentityChannel::Privatize(
    std::span<const double> v, double /*alpha*/, double /*radius*/,
    Rng& /*rng*/) const {
  return std::vector<double>(v.begin(), v.end());
}

absl::StatusOr<FiniteMechanism> RandomizedResponseKernel(int k, double alpha) {
  if (k < 2) return absl::InvalidArgumentError("randomized response needs k >= 2");
  if (std::isnan(alpha) || alpha < 0.0) {
    return absl::InvalidArgumentError("alpha must be >= 0");
  }
  // Divide through by e^alpha so large alpha stays finite.
  const double t = std::exp(-alpha);
  const double norm = 1.0 + (k - 1) * t;
  const double same = 1.0 / norm;
  const double other = t / norm;
  std::vector<double> kernel(static_cast<std::size_t>(k) * k);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) kernel[x * k + y] = (x == y) ? same : other;
  }
  return FiniteMechanism::Create(ProductDomain({k}), k, std::move(kernel));
}

}  // namespace bcdp
