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

#ifndef BCDP_RANDOM_H_
#define BCDP_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bcdp {

// Engine used for every random stream in the library.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t MixBits(std::uint64_t x);

// Counter-based stream derivation. The seed of the stream addressed by
// (root, path[0], path[1], ...) is
//   h_0 = MixBits(root),  h_{j+1} = MixBits(h_j + kGolden * (path[j] + 1)),
// so a stream depends only on its own address: adding trials or users never
// perturbs the streams of existing ones.
std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> path);

inline Rng MakeStream(std::uint64_t root,
                      std::initializer_list<std::uint64_t> path) {
  return Rng(DeriveSeed(root, path));
}

}  // namespace bcdp

#endif  // BCDP_RANDOM_H_
