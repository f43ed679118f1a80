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

#include "bcdp/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace bcdp {

namespace {

absl::string_view StripComment(absl::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string Unwrap(absl::string_view value) {
  value = absl::StripAsciiWhitespace(value);
  if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                            (value.front() == '\'' && value.back() == '\''))) {
    value = value.substr(1, value.size() - 2);
  } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
    value = absl::StripAsciiWhitespace(value.substr(1, value.size() - 2));
  }
  return std::string(value);
}

absl::Status BadValue(absl::string_view key, absl::string_view value,
                      absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("bad value for '", key, "': '", value, "' (", what, ")"));
}

std::vector<absl::string_view> SplitList(absl::string_view value) {
  value = absl::StripAsciiWhitespace(value);
  if (!value.empty() && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }
  return absl::StrSplit(value, absl::ByAnyChar(", \t"), absl::SkipEmpty());
}

}  // namespace

absl::StatusOr<ConfigMap> ParseConfig(absl::string_view text) {
  ConfigMap out;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": tables are not supported"));
    }
    const std::size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("line ", line_no, ": empty key"));
    }
    if (!out.emplace(key, Unwrap(line.substr(eq + 1))).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": duplicate key '", key, "'"));
    }
  }
  return out;
}

absl::StatusOr<ConfigMap> ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string FormatConfig(const ConfigMap& config) {
  std::string out;
  for (const auto& [key, value] : config) absl::StrAppend(&out, key, " = ", value, "\n");
  return out;
}

absl::StatusOr<double> ParseDouble(absl::string_view key, absl::string_view value) {
  double v = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(value), &v)) {
    return BadValue(key, value, "expected a number");
  }
  return v;
}

absl::StatusOr<int> ParseInt(absl::string_view key, absl::string_view value) {
  int v = 0;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(value), &v)) {
    return BadValue(key, value, "expected an integer");
  }
  return v;
}

absl::StatusOr<std::uint64_t> ParseUint64(absl::string_view key,
                                          absl::string_view value) {
  std::uint64_t v = 0;
  absl::string_view s = absl::StripAsciiWhitespace(value);
  if (s.empty() || s.front() == '-' || !absl::SimpleAtoi(s, &v)) {
    return BadValue(key, value, "expected an unsigned 64-bit integer");
  }
  return v;
}

absl::StatusOr<bool> ParseBool(absl::string_view key, absl::string_view value) {
  bool v = false;
  if (!absl::SimpleAtob(absl::StripAsciiWhitespace(value), &v)) {
    return BadValue(key, value, "expected true or false");
  }
  return v;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(absl::string_view key,
                                                    absl::string_view value) {
  std::vector<double> out;
  for (absl::string_view item : SplitList(value)) {
    absl::StatusOr<double> v = ParseDouble(key, item);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  if (out.empty()) return BadValue(key, value, "expected a non-empty list");
  return out;
}

absl::StatusOr<std::vector<int>> ParseIntList(absl::string_view key,
                                              absl::string_view value) {
  std::vector<int> out;
  for (absl::string_view item : SplitList(value)) {
    absl::StatusOr<int> v = ParseInt(key, item);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  if (out.empty()) return BadValue(key, value, "expected a non-empty list");
  return out;
}

}  // namespace bcdp
