// Copyright 2026 The pdsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDSUM_RNG_H_
#define PDSUM_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace pdsum {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Derives an independent child seed from a parent seed, a stream label and an
// index. All randomness in a run descends from one root seed this way, so
// adding a new consumer never perturbs the draws of existing ones.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view stream,
                          std::uint64_t index = 0);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t parent, std::string_view stream,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(parent, stream, index));
}

}  // namespace pdsum

#endif  // PDSUM_RNG_H_
