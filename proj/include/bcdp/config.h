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

// Flat key-value configuration files.
//
//   # comment
//   d = 10
//   delta = [0.2, 0.2, 2, 2]
//   zeta = "heuristic"
//   iid_data = false
//
// Keys are case-sensitive and '_' is read as '-'. Quotes and list brackets
// are stripped; tables and nested values are rejected.

#ifndef BCDP_CONFIG_H_
#define BCDP_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace bcdp {

using ConfigMap = std::map<std::string, std::string>;

absl::StatusOr<ConfigMap> ParseConfig(absl::string_view text);
absl::StatusOr<ConfigMap> ReadConfigFile(const std::string& path);

// Canonical "key = value" lines in key order.
std::string FormatConfig(const ConfigMap& config);

absl::StatusOr<double> ParseDouble(absl::string_view key, absl::string_view value);
absl::StatusOr<int> ParseInt(absl::string_view key, absl::string_view value);
absl::StatusOr<std::uint64_t> ParseUint64(absl::string_view key,
                                          absl::string_view value);
absl::StatusOr<bool> ParseBool(absl::string_view key, absl::string_view value);
// Comma- or whitespace-separated, optionally bracketed.
absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view key,
                                                    absl::string_view value);
absl::StatusOr<std::vector<int>> ParseIntList(absl::string_view key,
                                              absl::string_view value);

}  // namespace bcdp

#endif  // BCDP_CONFIG_H_
