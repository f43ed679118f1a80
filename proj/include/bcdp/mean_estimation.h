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

// Layered mean mechanism.
//
// In internal (sensitivity-ascending) order, layer k privatizes the suffix
// x_{k..d} with the incremental budget c_k - c_{k-1} on the ball of radius
// sqrt(d - k + 1). Coordinate i is then estimated by the weighted average of
// the layer outputs that cover it, with inverse-variance weights
//   w_k = (c_k - c_{k-1})^2 / (d - k + 1).
// Perturbing coordinate i only affects layers 1..i, which consume c_i in
// total, and the whole report consumes c_d.

#ifndef BCDP_MEAN_ESTIMATION_H_
#define BCDP_MEAN_ESTIMATION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bcdp/calibration.h"
#include "bcdp/mechanisms.h"
#include "bcdp/random.h"

namespace bcdp {

struct LayeredReport {
  // Per-coordinate estimates in caller order, not projected.
  std::vector<double> nu_hat;
  // Layer weights w_k in internal order.
  std::vector<double> weights;
  // sum_{k <= i} w_k for every coordinate, caller order.
  std::vector<double> coordinate_weight;
};

struct EstimateVector {
  std::vector<double> mean_hat;       // in [-1, 1]^d
  std::vector<double> variance_pred;  // (1/n) / coordinate weight; inf allowed
};

// w_k in internal order.
std::vector<double> LayerWeights(const CoordinateBudget& budget);

// Caller coordinates touched by each layer, layer-indexed in internal order.
std::vector<std::vector<std::size_t>> LayerIncidence(
    const CoordinateBudget& budget);

// One user's layered report. Layers with zero incremental budget are
// skipped; coordinates no layer covers report 0.
absl::StatusOr<LayeredReport> MMeanSample(std::span<const double> x,
                                          const CoordinateBudget& budget,
                                          const VectorChannel& channel,
                                          Rng& rng);

// Streaming average of layered reports, projected onto [-1, 1]^d.
class MeanAccumulator {
 public:
  explicit MeanAccumulator(std::size_t dim) : sum_(dim, 0.0), weight_(dim, 0.0) {}

  absl::Status Add(const LayeredReport& report);
  std::size_t count() const { return count_; }
  absl::StatusOr<EstimateVector> Finish() const;

 private:
  std::vector<double> sum_;
  std::vector<double> weight_;
  std::size_t count_ = 0;
};

absl::StatusOr<EstimateVector> AggregateMean(
    std::span<const LayeredReport> reports, std::size_t dim);

// Coordinatewise clamp to [-1, 1].
std::vector<double> ProjectToBox(std::span<const double> v);

// Error-bound shape without constants:
//   min{ (1/n) sum_i 1 / sum_{k <= i} w_k , d }
// where an uncovered coordinate contributes +inf (so the cap applies).
double PredictedMseShape(const CoordinateBudget& budget, int n);

}  // namespace bcdp

#endif  // BCDP_MEAN_ESTIMATION_H_
