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

#include "bcdp/finite_mechanism.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace bcdp {

ProductDomain::ProductDomain(std::vector<int> sizes)
    : sizes_(std::move(sizes)), strides_(sizes_.size()) {
  num_points_ = sizes_.empty() ? 0 : 1;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    strides_[i] = num_points_;
    num_points_ *= static_cast<std::size_t>(sizes_[i]);
  }
}

std::vector<int> ProductDomain::Decode(std::size_t point) const {
  std::vector<int> out(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) out[i] = Coordinate(point, i);
  return out;
}

std::size_t ProductDomain::Encode(std::span<const int> values) const {
  std::size_t point = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    point += static_cast<std::size_t>(values[i]) * strides_[i];
  }
  return point;
}

std::size_t ProductDomain::RestIndex(std::size_t point,
                                     std::size_t coordinate) const {
  const std::size_t stride = strides_[coordinate];
  const std::size_t block = stride * static_cast<std::size_t>(sizes_[coordinate]);
  return (point / block) * stride + point % stride;
}

namespace {

absl::Status ValidateDomain(const ProductDomain& domain) {
  if (domain.num_coordinates() == 0) {
    return absl::InvalidArgumentError("domain needs at least one coordinate");
  }
  for (int s : domain.sizes()) {
    if (s < 1) return absl::InvalidArgumentError("coordinate sizes must be >= 1");
  }
  return absl::OkStatus();
}

absl::Status ValidateDistribution(std::span<const double> p,
                                  absl::string_view what) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat(what, " has a negative or non-finite entry"));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s sums to %.17g, not 1", what, sum));
  }
  return absl::OkStatus();
}

// Splits text into tokens, dropping '#' comments.
std::vector<std::string> Tokenize(absl::string_view text) {
  std::vector<std::string> tokens;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    if (std::size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    for (absl::string_view tok :
         absl::StrSplit(line, absl::ByAnyChar(" \t\r,"), absl::SkipEmpty())) {
      tokens.emplace_back(tok);
    }
  }
  return tokens;
}

struct Header {
  std::vector<int> sizes;
  int num_outputs = 0;
  std::size_t next = 0;
};

absl::StatusOr<Header> ParseHeader(const std::vector<std::string>& tokens,
                                   absl::string_view tag, bool with_outputs) {
  if (tokens.empty() || tokens[0] != tag) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected '", tag, "' header"));
  }
  Header h;
  int d = 0;
  if (tokens.size() < 2 || !absl::SimpleAtoi(tokens[1], &d) || d < 1) {
    return absl::InvalidArgumentError("bad coordinate count in header");
  }
  const std::size_t need = 2 + static_cast<std::size_t>(d) + (with_outputs ? 1 : 0);
  if (tokens.size() < need) {
    return absl::InvalidArgumentError("truncated header");
  }
  for (int i = 0; i < d; ++i) {
    int s = 0;
    if (!absl::SimpleAtoi(tokens[2 + i], &s) || s < 1) {
      return absl::InvalidArgumentError("bad coordinate size in header");
    }
    h.sizes.push_back(s);
  }
  if (with_outputs) {
    if (!absl::SimpleAtoi(tokens[2 + d], &h.num_outputs) || h.num_outputs < 1) {
      return absl::InvalidArgumentError("bad output count in header");
    }
  }
  h.next = need;
  return h;
}

absl::StatusOr<std::vector<double>> ParseValues(
    const std::vector<std::string>& tokens, std::size_t first,
    std::size_t expected) {
  if (tokens.size() - first != expected) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d probabilities, found %d", expected, tokens.size() - first));
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (!absl::SimpleAtod(tokens[first + i], &out[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: ", tokens[first + i]));
    }
  }
  return out;
}

std::string HeaderLine(absl::string_view tag, const ProductDomain& domain) {
  std::string out = absl::StrCat(tag, " ", domain.num_coordinates());
  for (int s : domain.sizes()) absl::StrAppend(&out, " ", s);
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

absl::StatusOr<FiniteMechanism> FiniteMechanism::Create(
    ProductDomain domain, int num_outputs, std::vector<double> kernel) {
  if (absl::Status s = ValidateDomain(domain); !s.ok()) return s;
  if (num_outputs < 1) {
    return absl::InvalidArgumentError("mechanism needs at least one output");
  }
  if (kernel.size() != domain.num_points() * num_outputs) {
    return absl::InvalidArgumentError("kernel size does not match domain");
  }
  for (std::size_t x = 0; x < domain.num_points(); ++x) {
    std::span<const double> row(kernel.data() + x * num_outputs,
                                static_cast<std::size_t>(num_outputs));
    if (absl::Status s = ValidateDistribution(row, absl::StrCat("kernel row ", x));
        !s.ok()) {
      return s;
    }
  }
  return FiniteMechanism(std::move(domain), num_outputs, std::move(kernel));
}

absl::StatusOr<DiscretePrior> DiscretePrior::Create(ProductDomain domain,
                                                    std::vector<double> pmf) {
  if (absl::Status s = ValidateDomain(domain); !s.ok()) return s;
  if (pmf.size() != domain.num_points()) {
    return absl::InvalidArgumentError("prior size does not match domain");
  }
  if (absl::Status s = ValidateDistribution(pmf, "prior"); !s.ok()) return s;
  return DiscretePrior(std::move(domain), std::move(pmf));
}

std::vector<double> DiscretePrior::Marginal(std::size_t coordinate) const {
  std::vector<double> out(domain_.size(coordinate), 0.0);
  for (std::size_t x = 0; x < pmf_.size(); ++x) {
    out[domain_.Coordinate(x, coordinate)] += pmf_[x];
  }
  return out;
}

std::vector<double> DiscretePrior::ConditionalRest(std::size_t coordinate,
                                                   int value) const {
  std::vector<double> out(domain_.RestSize(coordinate), 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < pmf_.size(); ++x) {
    if (domain_.Coordinate(x, coordinate) != value) continue;
    out[domain_.RestIndex(x, coordinate)] += pmf_[x];
    total += pmf_[x];
  }
  for (double& v : out) v /= total;
  return out;
}

DiscretePrior UniformPrior(const ProductDomain& domain) {
  std::vector<double> pmf(domain.num_points(),
                          1.0 / static_cast<double>(domain.num_points()));
  return *DiscretePrior::Create(domain, std::move(pmf));
}

absl::StatusOr<FiniteMechanism> ParseKernel(absl::string_view text) {
  const std::vector<std::string> tokens = Tokenize(text);
  absl::StatusOr<Header> h = ParseHeader(tokens, "kernel", true);
  if (!h.ok()) return h.status();
  ProductDomain domain(h->sizes);
  absl::StatusOr<std::vector<double>> values =
      ParseValues(tokens, h->next, domain.num_points() * h->num_outputs);
  if (!values.ok()) return values.status();
  return FiniteMechanism::Create(std::move(domain), h->num_outputs,
                                 *std::move(values));
}

absl::StatusOr<DiscretePrior> ParsePrior(absl::string_view text) {
  const std::vector<std::string> tokens = Tokenize(text);
  absl::StatusOr<Header> h = ParseHeader(tokens, "prior", false);
  if (!h.ok()) return h.status();
  ProductDomain domain(h->sizes);
  absl::StatusOr<std::vector<double>> values =
      ParseValues(tokens, h->next, domain.num_points());
  if (!values.ok()) return values.status();
  return DiscretePrior::Create(std::move(domain), *std::move(values));
}

std::string FormatKernel(const FiniteMechanism& mechanism) {
  std::string out = absl::StrCat(HeaderLine("kernel", mechanism.domain()), " ",
                                 mechanism.num_outputs(), "\n");
  for (std::size_t x = 0; x < mechanism.num_inputs(); ++x) {
    for (int y = 0; y < mechanism.num_outputs(); ++y) {
      absl::StrAppend(&out, y ? "\t" : "",
                      absl::StrFormat("%.17g", mechanism.prob(x, y)));
    }
    absl::StrAppend(&out, "\n");
  }
  return out;
}

std::string FormatPrior(const DiscretePrior& prior) {
  std::string out = absl::StrCat(HeaderLine("prior", prior.domain()), "\n");
  for (double p : prior.pmf()) absl::StrAppend(&out, absl::StrFormat("%.17g\n", p));
  return out;
}

absl::StatusOr<FiniteMechanism> ReadKernelFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseKernel(*text);
}

absl::StatusOr<DiscretePrior> ReadPriorFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParsePrior(*text);
}

absl::Status WriteTextFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

}  // namespace bcdp
