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

#include "bcdp/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace bcdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + q * (exp(x) - 1)), exact at q = 0 and q = 1.
double LogMixture(double q, double x) {
  if (q == 0.0) return 0.0;
  if (q == 1.0) return x;
  return std::log1p(q * std::expm1(x));
}

// log((exp(x) + q - 1) / q) = log(1 + (exp(x) - 1) / q); +inf at q = 0.
double InverseLogMixture(double q, double x) {
  if (q == 0.0) return kInf;
  if (q == 1.0) return x;
  return std::log1p(std::expm1(x) / q);
}

std::vector<double> ClampedDelta(const PrivacyDemand& demand) {
  std::vector<double> out(demand.delta.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(demand.delta[i], demand.epsilon);
  }
  return out;
}

}  // namespace

absl::Status ValidateDemand(const PrivacyDemand& demand) {
  if (demand.delta.empty()) {
    return absl::InvalidArgumentError("privacy demand has no coordinates");
  }
  if (!std::isfinite(demand.epsilon) || demand.epsilon < 0.0) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  for (double d : demand.delta) {
    if (std::isnan(d) || d < 0.0) {
      return absl::InvalidArgumentError("delta entries must be >= 0 or +inf");
    }
  }
  if (!(demand.q >= 0.0 && demand.q <= 1.0)) {
    return absl::InvalidArgumentError("q must lie in [0, 1]");
  }
  if (!(demand.zeta > 0.0 && demand.zeta <= 1.0)) {
    return absl::InvalidArgumentError("zeta must lie in (0, 1]");
  }
  return absl::OkStatus();
}

CoordinateBudget::CoordinateBudget(std::vector<double> c)
    : c_(std::move(c)), perm_(c_.size()) {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
}

CoordinateBudget::CoordinateBudget(std::vector<double> c,
                                   std::vector<std::size_t> perm)
    : c_(std::move(c)), perm_(std::move(perm)) {}

std::vector<double> CoordinateBudget::InCallerOrder() const {
  return ToCaller(c_);
}

std::vector<double> CoordinateBudget::ToInternal(
    std::span<const double> caller) const {
  std::vector<double> out(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) out[k] = caller[perm_[k]];
  return out;
}

std::vector<double> CoordinateBudget::ToCaller(
    std::span<const double> internal) const {
  std::vector<double> out(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) out[perm_[k]] = internal[k];
  return out;
}

CoordinateBudget CoordinateBudget::Scaled(double factor) const {
  std::vector<double> c = c_;
  for (double& v : c) v *= factor;
  return CoordinateBudget(std::move(c), perm_);
}

absl::StatusOr<CoordinateBudget> CalibrateBudgets(const PrivacyDemand& demand) {
  if (absl::Status s = ValidateDemand(demand); !s.ok()) return s;
  const std::size_t d = demand.delta.size();
  const std::vector<double> clamped = ClampedDelta(demand);

  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return clamped[a] < clamped[b];
  });
  std::vector<double> dt(d);
  for (std::size_t k = 0; k < d; ++k) dt[k] = clamped[perm[k]];

  const double q = demand.q;
  const double c_last =
      std::min(InverseLogMixture(q, demand.zeta * dt.front()), dt.back());
  const double leak = LogMixture(q, c_last);

  std::vector<double> c(d);
  for (std::size_t k = 0; k < d; ++k) {
    if (c_last <= dt[k]) {
      c[k] = c_last;
    } else {
      // Nonnegative in exact arithmetic because c_last is capped by the
      // zeta-split of dt_1; the clamp only absorbs rounding at zeta = 1.
      c[k] = std::max(0.0, dt[k] - leak);
    }
  }
  return CoordinateBudget(std::move(c), std::move(perm));
}

double CalibrationSlackViolation(const PrivacyDemand& demand,
                                 const CoordinateBudget& budget) {
  const std::vector<double> dt = budget.ToInternal(ClampedDelta(demand));
  const std::vector<double>& c = budget.internal();
  const double c_last = budget.total();
  double worst = c_last - std::min(demand.epsilon, dt.back());
  const double leak = LogMixture(demand.q, c_last);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c_last > dt[k]) worst = std::max(worst, c[k] + leak - dt[k]);
  }
  return worst;
}

absl::StatusOr<std::vector<double>> CdpToBcdpBound(
    std::span<const double> c, std::span<const double> q,
    std::optional<double> epsilon) {
  if (c.size() != q.size()) {
    return absl::InvalidArgumentError("c and q must have the same length");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c[i]) || c[i] < 0.0) {
      return absl::InvalidArgumentError("c entries must be finite and >= 0");
    }
    if (!(q[i] >= 0.0 && q[i] <= 1.0)) {
      return absl::InvalidArgumentError("q entries must lie in [0, 1]");
    }
  }
  if (epsilon.has_value() && !(*epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be >= 0");
  }

  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (epsilon.has_value()) {
      out[i] = std::min(c[i] + LogMixture(q[i], *epsilon), *epsilon);
      continue;
    }
    double others = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j != i) others += c[j];
    }
    out[i] = c[i] + LogMixture(q[i], others);
  }
  return out;
}

absl::StatusOr<FeasibilityMatrix> FeasibilityMatrix::Create(
    std::span<const double> delta, std::span<const double> q) {
  if (delta.size() != q.size() || delta.empty()) {
    return absl::InvalidArgumentError(
        "delta and q must be non-empty and of equal length");
  }
  const std::size_t d = delta.size();
  std::vector<double> a(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(delta[i]) || delta[i] <= 0.0) {
      return absl::InvalidArgumentError("delta entries must lie in (0, inf)");
    }
    if (!(q[i] > 0.0 && q[i] <= 1.0)) {
      return absl::InvalidArgumentError(
          "q entries must lie in (0, 1]; independent coordinates need no "
          "relaxation");
    }
    const double off = 1.0 / InverseLogMixture(q[i], delta[i]);
    for (std::size_t j = 0; j < d; ++j) {
      a[i * d + j] = (i == j) ? 1.0 / delta[i] : off;
    }
  }
  return FeasibilityMatrix(d, std::move(a));
}

std::vector<double> FeasibilityMatrix::Apply(std::span<const double> c) const {
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out[i] += at(i, j) * c[j];
  }
  return out;
}

bool FeasibilityMatrix::IsFeasible(std::span<const double> c) const {
  if (c.size() != dim_) return false;
  for (double row : Apply(c)) {
    if (row > 1.0) return false;
  }
  return true;
}

absl::StatusOr<double> CorollaryRate(int d, int k, double delta,
                                     double epsilon, double q, int n) {
  if (k < 1 || k > d) return absl::InvalidArgumentError("need 1 <= k <= d");
  if (!(delta > 0.0) || !(epsilon > 2.0 * delta)) {
    return absl::InvalidArgumentError("need delta > 0 and epsilon > 2 delta");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError("q must lie in [0, 1]");
  }
  if (n < 1) return absl::InvalidArgumentError("need n >= 1");

  const double sensitive = static_cast<double>(d) * k / (delta * delta);
  const double rest = static_cast<double>(d - k);
  const double threshold = std::expm1(delta / 2.0) / std::expm1(epsilon);
  double second;
  if (q <= threshold) {
    second = rest * rest / (epsilon * epsilon);
  } else {
    const double c_last = InverseLogMixture(q, delta / 2.0);
    const double gap = c_last - delta / 2.0;
    second = rest * rest / (rest / d * delta * delta + gap * gap);
  }
  return (sensitive + second) / n;
}

}  // namespace bcdp
