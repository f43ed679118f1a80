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

#ifndef BCDP_FINITE_MECHANISM_H_
#define BCDP_FINITE_MECHANISM_H_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace bcdp {

// Row-sum / total-mass tolerance for kernels and priors.
inline constexpr double kStochasticTolerance = 1e-12;

// Finite product domain X_1 x ... x X_d, each X_j = {0, ..., size_j - 1}.
// Points are indexed in row-major order: the first coordinate varies
// slowest.
class ProductDomain {
 public:
  ProductDomain() = default;
  explicit ProductDomain(std::vector<int> sizes);

  std::size_t num_coordinates() const { return sizes_.size(); }
  const std::vector<int>& sizes() const { return sizes_; }
  int size(std::size_t coordinate) const { return sizes_[coordinate]; }
  std::size_t num_points() const { return num_points_; }

  int Coordinate(std::size_t point, std::size_t coordinate) const {
    return static_cast<int>((point / strides_[coordinate]) %
                            static_cast<std::size_t>(sizes_[coordinate]));
  }
  std::vector<int> Decode(std::size_t point) const;
  std::size_t Encode(std::span<const int> values) const;

  // Index of the point with coordinate `coordinate` removed, in the
  // row-major order of the remaining coordinates.
  std::size_t RestIndex(std::size_t point, std::size_t coordinate) const;
  std::size_t RestSize(std::size_t coordinate) const {
    return num_points_ / static_cast<std::size_t>(sizes_[coordinate]);
  }

  friend bool operator==(const ProductDomain&, const ProductDomain&) = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t num_points_ = 0;
};

// Markov kernel from a finite product domain to {0, ..., num_outputs - 1}.
class FiniteMechanism {
 public:
  // `kernel` is row-major, one row of `num_outputs` probabilities per input
  // point. Rows must be non-negative and sum to one within
  // kStochasticTolerance.
  static absl::StatusOr<FiniteMechanism> Create(ProductDomain domain,
                                                int num_outputs,
                                                std::vector<double> kernel);

  const ProductDomain& domain() const { return domain_; }
  int num_outputs() const { return num_outputs_; }
  std::size_t num_inputs() const { return domain_.num_points(); }

  double prob(std::size_t input, int output) const {
    return kernel_[input * num_outputs_ + output];
  }
  std::span<const double> row(std::size_t input) const {
    return {kernel_.data() + input * num_outputs_,
            static_cast<std::size_t>(num_outputs_)};
  }
  const std::vector<double>& kernel() const { return kernel_; }

  // Draws one output for `input` by inverse-CDF sampling.
  template <typename Urbg>
  int Sample(std::size_t input, Urbg& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double acc = 0.0;
    int last_positive = 0;
    for (int y = 0; y < num_outputs_; ++y) {
      const double p = prob(input, y);
      if (p > 0.0) last_positive = y;
      acc += p;
      if (u < acc) return y;
    }
    return last_positive;
  }

 private:
  FiniteMechanism(ProductDomain domain, int num_outputs,
                  std::vector<double> kernel)
      : domain_(std::move(domain)),
        num_outputs_(num_outputs),
        kernel_(std::move(kernel)) {}

  ProductDomain domain_;
  int num_outputs_ = 0;
  std::vector<double> kernel_;
};

// Probability mass function over a finite product domain.
class DiscretePrior {
 public:
  static absl::StatusOr<DiscretePrior> Create(ProductDomain domain,
                                              std::vector<double> pmf);

  const ProductDomain& domain() const { return domain_; }
  double mass(std::size_t point) const { return pmf_[point]; }
  const std::vector<double>& pmf() const { return pmf_; }

  // Marginal pmf of one coordinate.
  std::vector<double> Marginal(std::size_t coordinate) const;

  // Conditional pmf of the remaining coordinates given x_i = value, indexed
  // by ProductDomain::RestIndex. `value` must carry positive mass.
  std::vector<double> ConditionalRest(std::size_t coordinate, int value) const;

 private:
  DiscretePrior(ProductDomain domain, std::vector<double> pmf)
      : domain_(std::move(domain)), pmf_(std::move(pmf)) {}

  ProductDomain domain_;
  std::vector<double> pmf_;
};

// Uniform prior over the domain (independent uniform coordinates).
DiscretePrior UniformPrior(const ProductDomain& domain);

// Plain-text interchange format. Kernel files start with a header line
//   kernel <d> <size_1> ... <size_d> <num_outputs>
// followed by |X| * num_outputs probabilities (row-major, one input point
// per row). Prior files start with
//   prior <d> <size_1> ... <size_d>
// followed by |X| masses. Tokens are whitespace separated; '#' starts a
// comment that runs to the end of the line.
absl::StatusOr<FiniteMechanism> ParseKernel(absl::string_view text);
absl::StatusOr<DiscretePrior> ParsePrior(absl::string_view text);
std::string FormatKernel(const FiniteMechanism& mechanism);
std::string FormatPrior(const DiscretePrior& prior);

absl::StatusOr<FiniteMechanism> ReadKernelFile(const std::string& path);
absl::StatusOr<DiscretePrior> ReadPriorFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, absl::string_view contents);

}  // namespace bcdp

#endif  // BCDP_FINITE_MECHANISM_H_
