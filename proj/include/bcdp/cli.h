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

// Command-line front end.
//
//   bcdp calibrate --epsilon 2 --delta 0.2,0.2,2 --q 0.5 --zeta 0.5
//   bcdp audit --kernel k.tsv [--prior p.tsv]
//   bcdp audit --emit-fixtures DIR
//   bcdp mean-sim [--config FILE] --seed N [--out DIR] [overrides]
//   bcdp ols-sim  [--config FILE] --seed N [--out DIR] [overrides]
//
// Every config key can also be given as a flag of the same name; flags win
// over the file, which wins over the built-in defaults. Simulations write
// raw.csv, summary.csv and manifest.txt to the output directory.

#ifndef BCDP_CLI_H_
#define BCDP_CLI_H_

#include <ostream>

namespace bcdp {

inline constexpr char kVersion[] = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

int CliEntry(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace bcdp

#endif  // BCDP_CLI_H_
