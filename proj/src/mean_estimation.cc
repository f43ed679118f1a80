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

#include "bcdp/mean_estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bcdp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::vector<double> LayerWeights(const CoordinateBudget& budget) {
  const std::vector<double>& c = budget.internal();
  const std::size_t d = c.size();
  std::vector<double> w(d);
  double prev = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double step = c[k] - prev;
    w[k] = step * step / static_cast<double>(d - k);
    prev = c[k];
  }
  return w;
}

std::vector<std::vector<std::size_t>> LayerIncidence(
    const CoordinateBudget& budget) {
  const std::size_t d = budget.dim();
  std::vector<std::vector<std::size_t>> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = k; j < d; ++j) out[k].push_back(budget.perm()[j]);
  }
  return out;
}

absl::StatusOr<LayeredReport> MMeanSample(std::span<const double> x,
                                          const CoordinateBudget& budget,
                                          const VectorChannel& channel,
                                          Rng& rng) {
  const std::size_t d = budget.dim();
  if (x.size() != d) {
    return absl::InvalidArgumentError("data point and budget differ in dimension");
  }
  for (double v : x) {
    if (!(v >= -1.0 && v <= 1.0)) {
      return absl::OutOfRangeError("data point must lie in [-1, 1]^d");
    }
  }
  const std::vector<double> xi = budget.ToInternal(x);
  const std::vector<double>& c = budget.internal();

  LayeredReport report;
  report.weights = LayerWeights(budget);
  std::vector<double> num(d, 0.0);
  std::vector<double> den(d, 0.0);
  double prev = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double step = c[k] - prev;
    prev = c[k];
    if (!(step > 0.0)) continue;
    std::span<const double> suffix(xi.data() + k, d - k);
    absl::StatusOr<std::vector<double>> y = channel.Privatize(
        suffix, step, std::sqrt(static_cast<double>(d - k)), rng);
    if (!y.ok()) return y.status();
    const double w = report.weights[k];
    for (std::size_t j = k; j < d; ++j) {
      num[j] += w * (*y)[j - k];
      den[j] += w;
    }
  }
  // Coordinate i is covered by layers 1..i, so den is a prefix sum of w.
  std::vector<double> nu(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (den[j] > 0.0) nu[j] = num[j] / den[j];
  }
  report.nu_hat = budget.ToCaller(nu);
  report.coordinate_weight = budget.ToCaller(den);
  return report;
}

absl::Status MeanAccumulator::Add(const LayeredReport& report) {
  if (report.nu_hat.size() != sum_.size() ||
      report.coordinate_weight.size() != sum_.size()) {
    return absl::InvalidArgumentError("report dimension mismatch");
  }
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += report.nu_hat[i];
    weight_[i] = report.coordinate_weight[i];
  }
  ++count_;
  return absl::OkStatus();
}

absl::StatusOr<EstimateVector> MeanAccumulator::Finish() const {
  if (count_ == 0) return absl::InvalidArgumentError("no reports to aggregate");
  const double n = static_cast<double>(count_);
  EstimateVector out;
  std::vector<double> avg(sum_.size());
  out.variance_pred.resize(sum_.size());
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    avg[i] = sum_[i] / n;
    out.variance_pred[i] = weight_[i] > 0.0 ? 1.0 / (n * weight_[i]) : kInf;
  }
  out.mean_hat = ProjectToBox(avg);
  return out;
}

absl::StatusOr<EstimateVector> AggregateMean(
    std::span<const LayeredReport> reports, std::size_t dim) {
  MeanAccumulator acc(dim);
  for (const LayeredReport& r : reports) {
    if (absl::Status s = acc.Add(r); !s.ok()) return s;
  }
  return acc.Finish();
}

std::vector<double> ProjectToBox(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], -1.0, 1.0);
  return out;
}

double PredictedMseShape(const CoordinateBudget& budget, int n) {
  const std::vector<double> w = LayerWeights(budget);
  double prefix = 0.0;
  double total = 0.0;
  for (double wk : w) {
    prefix += wk;
    total += prefix > 0.0 ? 1.0 / prefix : kInf;
  }
  return std::min(total / n, static_cast<double>(w.size()));
}

}  // namespace bcdp
