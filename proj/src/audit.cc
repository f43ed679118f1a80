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

#include "bcdp/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace bcdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack of the hypothesis-testing check; absorbs the rounding of
// exp(log(ratio)) at an exactly audited level.
constexpr double kHtRelativeSlack = 1e-12;

// Running max / min of one output probability over a group of laws.
struct Range {
  double hi = 0.0;
  double lo = kInf;

  void Add(double p) {
    hi = std::max(hi, p);
    lo = std::min(lo, p);
  }
  double LogRatio() const {
    if (hi == 0.0) return 0.0;  // 0/0: output impossible under every law
    if (lo == 0.0) return kInf;
    return std::log(hi / lo);
  }
};

double MaxLogRatio(std::span<const Range> ranges) {
  double level = 0.0;
  for (const Range& r : ranges) level = std::max(level, r.LogRatio());
  return level;
}

absl::Status CheckPair(const FiniteMechanism& mechanism,
                       const DiscretePrior& prior) {
  if (!(mechanism.domain() == prior.domain())) {
    return absl::InvalidArgumentError(
        "mechanism and prior live on different domains");
  }
  return absl::OkStatus();
}

// Values of coordinate i that carry positive prior mass.
std::vector<int> SupportValues(const DiscretePrior& prior,
                               std::size_t coordinate) {
  std::vector<int> out;
  const std::vector<double> marginal = prior.Marginal(coordinate);
  for (int s = 0; s < static_cast<int>(marginal.size()); ++s) {
    if (marginal[s] > 0.0) out.push_back(s);
  }
  return out;
}

}  // namespace

double ExactLdpLevel(const FiniteMechanism& mechanism) {
  std::vector<Range> ranges(mechanism.num_outputs());
  for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
    for (int y = 0; y < mechanism.num_outputs(); ++y) {
      ranges[y].Add(mechanism.prob(x, y));
    }
  }
  return MaxLogRatio(ranges);
}

std::vector<double> ExactCdpLevels(const FiniteMechanism& mechanism) {
  const ProductDomain& domain = mechanism.domain();
  const int m = mechanism.num_outputs();
  std::vector<double> levels(domain.num_coordinates());
  for (std::size_t i = 0; i < domain.num_coordinates(); ++i) {
    // One range per (x_{-i}, y): pairs differing only in coordinate i.
    std::vector<Range> ranges(domain.RestSize(i) * m);
    for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
      const std::size_t rest = domain.RestIndex(x, i);
      for (int y = 0; y < m; ++y) ranges[rest * m + y].Add(mechanism.prob(x, y));
    }
    levels[i] = MaxLogRatio(ranges);
  }
  return levels;
}

absl::StatusOr<double> ExactBdpLevel(const FiniteMechanism& mechanism,
                                     const DiscretePrior& prior) {
  if (absl::Status s = CheckPair(mechanism, prior); !s.ok()) return s;
  std::vector<Range> ranges(mechanism.num_outputs());
  for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
    if (prior.mass(x) <= 0.0) continue;
    for (int y = 0; y < mechanism.num_outputs(); ++y) {
      ranges[y].Add(mechanism.prob(x, y));
    }
  }
  return MaxLogRatio(ranges);
}

std::vector<double> ConditionalOutputLaw(const FiniteMechanism& mechanism,
                                         const DiscretePrior& prior,
                                         std::size_t coordinate, int value) {
  const ProductDomain& domain = mechanism.domain();
  std::vector<double> law(mechanism.num_outputs(), 0.0);
  double mass = 0.0;
  for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
    if (domain.Coordinate(x, coordinate) != value) continue;
    const double w = prior.mass(x);
    if (w == 0.0) continue;
    mass += w;
    for (int y = 0; y < mechanism.num_outputs(); ++y) {
      law[y] += w * mechanism.prob(x, y);
    }
  }
  for (double& p : law) p /= mass;
  return law;
}

absl::StatusOr<std::vector<double>> ExactBcdpLevels(
    const FiniteMechanism& mechanism, const DiscretePrior& prior) {
  if (absl::Status s = CheckPair(mechanism, prior); !s.ok()) return s;
  const std::size_t d = mechanism.domain().num_coordinates();
  std::vector<double> levels(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const std::vector<int> support = SupportValues(prior, i);
    if (support.size() < 2) continue;
    std::vector<Range> ranges(mechanism.num_outputs());
    for (int s : support) {
      const std::vector<double> law = ConditionalOutputLaw(mechanism, prior, i, s);
      for (int y = 0; y < mechanism.num_outputs(); ++y) ranges[y].Add(law[y]);
    }
    levels[i] = MaxLogRatio(ranges);
  }
  return levels;
}

double ConditionalTv(const DiscretePrior& prior, std::size_t coordinate) {
  const std::vector<int> support = SupportValues(prior, coordinate);
  std::vector<std::vector<double>> conditionals;
  conditionals.reserve(support.size());
  for (int s : support) conditionals.push_back(prior.ConditionalRest(coordinate, s));

  double worst = 0.0;
  for (std::size_t a = 0; a < conditionals.size(); ++a) {
    for (std::size_t b = a + 1; b < conditionals.size(); ++b) {
      double l1 = 0.0;
      for (std::size_t r = 0; r < conditionals[a].size(); ++r) {
        l1 += std::abs(conditionals[a][r] - conditionals[b][r]);
      }
      worst = std::max(worst, 0.5 * l1);
    }
  }
  return std::min(worst, 1.0);
}

std::vector<double> ConditionalTvBounds(const DiscretePrior& prior) {
  std::vector<double> out(prior.domain().num_coordinates());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ConditionalTv(prior, i);
  return out;
}

absl::StatusOr<HtCheckResult> HtTradeoffCheck(const FiniteMechanism& mechanism,
                                              const DiscretePrior& prior,
                                              std::span<const double> delta) {
  if (absl::Status s = CheckPair(mechanism, prior); !s.ok()) return s;
  const std::size_t d = mechanism.domain().num_coordinates();
  if (delta.size() != d) {
    return absl::InvalidArgumentError("need one level per coordinate");
  }
  const int m = mechanism.num_outputs();
  for (std::size_t i = 0; i < d; ++i) {
    if (std::isinf(delta[i]) && delta[i] > 0) continue;
    const double scale = std::exp(delta[i]);
    const std::vector<int> support = SupportValues(prior, i);
    std::vector<std::vector<double>> laws;
    for (int s : support) laws.push_back(ConditionalOutputLaw(mechanism, prior, i, s));

    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = 0; b < support.size(); ++b) {
        if (a == b) continue;
        for (int y = 0; y < m; ++y) {
          const double alpha = laws[a][y];
          // beta = P(Y != y | x_i = s'), summed directly so that
          // 1 - beta = laws[b][y] carries no cancellation error.
          double beta = 0.0;
          for (int z = 0; z < m; ++z) {
            if (z != y) beta += laws[b][z];
          }
          // exp(delta) * alpha + beta >= 1  <=>  exp(delta) * alpha >=
          // P(y | x_i = s'); the comparison is made in this form.
          const double power = laws[b][y];
          if (scale * alpha < power * (1.0 - kHtRelativeSlack)) {
            return HtCheckResult{
                .holds = false,
                .witness = HtWitness{.coordinate = i,
                                     .output = y,
                                     .value = support[a],
                                     .alt_value = support[b],
                                     .alpha = alpha,
                                     .beta = beta}};
          }
        }
      }
    }
  }
  return HtCheckResult{};
}

absl::StatusOr<FiniteMechanism> ComposeProduct(const FiniteMechanism& m1,
                                               const FiniteMechanism& m2) {
  if (!(m1.domain() == m2.domain())) {
    return absl::InvalidArgumentError("composed mechanisms need equal domains");
  }
  const int k1 = m1.num_outputs();
  const int k2 = m2.num_outputs();
  std::vector<double> kernel(m1.num_inputs() * k1 * k2);
  for (std::size_t x = 0; x < m1.num_inputs(); ++x) {
    for (int a = 0; a < k1; ++a) {
      for (int b = 0; b < k2; ++b) {
        kernel[(x * k1 + a) * k2 + b] = m1.prob(x, a) * m2.prob(x, b);
      }
    }
  }
  return FiniteMechanism::Create(m1.domain(), k1 * k2, std::move(kernel));
}

absl::StatusOr<FiniteMechanism> TensorProduct(
    std::span<const FiniteMechanism> factors) {
  if (factors.empty()) {
    return absl::InvalidArgumentError("tensor product of zero factors");
  }
  std::vector<int> sizes;
  std::vector<int> outputs;
  for (const FiniteMechanism& f : factors) {
    if (f.domain().num_coordinates() != 1) {
      return absl::InvalidArgumentError("tensor factors must be single-coordinate");
    }
    sizes.push_back(f.domain().size(0));
    outputs.push_back(f.num_outputs());
  }
  ProductDomain domain(sizes);
  ProductDomain output_domain(outputs);
  const std::size_t m = output_domain.num_points();
  std::vector<double> kernel(domain.num_points() * m);
  for (std::size_t x = 0; x < domain.num_points(); ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      double p = 1.0;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        p *= factors[j].prob(domain.Coordinate(x, j), output_domain.Coordinate(y, j));
      }
      kernel[x * m + y] = p;
    }
  }
  return FiniteMechanism::Create(std::move(domain), static_cast<int>(m),
                                 std::move(kernel));
}

absl::StatusOr<FiniteMechanism> Postprocess(const FiniteMechanism& mechanism,
                                            std::span<const int> map,
                                            std::optional<int> num_outputs) {
  if (map.size() != static_cast<std::size_t>(mechanism.num_outputs())) {
    return absl::InvalidArgumentError("map must be total on the outputs");
  }
  int out_count = 0;
  for (int z : map) {
    if (z < 0) return absl::InvalidArgumentError("map targets must be >= 0");
    out_count = std::max(out_count, z + 1);
  }
  if (num_outputs.has_value()) {
    if (*num_outputs < out_count) {
      return absl::InvalidArgumentError("map target outside output range");
    }
    out_count = *num_outputs;
  }
  std::vector<double> kernel(mechanism.num_inputs() * out_count, 0.0);
  for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
    for (int y = 0; y < mechanism.num_outputs(); ++y) {
      kernel[x * out_count + map[y]] += mechanism.prob(x, y);
    }
  }
  return FiniteMechanism::Create(mechanism.domain(), out_count, std::move(kernel));
}

absl::StatusOr<AuditReport> Audit(const FiniteMechanism& mechanism,
                                  const DiscretePrior& prior) {
  if (absl::Status s = CheckPair(mechanism, prior); !s.ok()) return s;
  AuditReport report;
  report.ldp_level = ExactLdpLevel(mechanism);
  report.cdp_levels = ExactCdpLevels(mechanism);
  report.bdp_level = *ExactBdpLevel(mechanism, prior);
  report.bcdp_levels = *ExactBcdpLevels(mechanism, prior);
  report.tv_bounds = ConditionalTvBounds(prior);
  return report;
}

std::string FormatAuditReport(const AuditReport& report) {
  auto fmt = [](std::string* out, double v) {
    absl::StrAppend(out, absl::StrFormat("%.17g", v));
  };
  std::string out;
  absl::StrAppend(&out, "ldp_level: ");
  fmt(&out, report.ldp_level);
  absl::StrAppend(&out, "\ncdp_levels: ", absl::StrJoin(report.cdp_levels, " ", fmt));
  absl::StrAppend(&out, "\nbdp_level: ");
  fmt(&out, report.bdp_level);
  absl::StrAppend(&out, "\nbcdp_levels: ",
                  absl::StrJoin(report.bcdp_levels, " ", fmt));
  absl::StrAppend(&out, "\ntv_bounds: ", absl::StrJoin(report.tv_bounds, " ", fmt),
                  "\n");
  return out;
}

}  // namespace bcdp
