// Copyright 2026 The shadowframe Authors
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

#ifndef SHADOWFRAME_RNG_H
#define SHADOWFRAME_RNG_H

#include <cstdint>
#include <random>

namespace shadowframe {

/// All randomness flows through explicitly passed engines of this type.
using Rng = std::mt19937_64;

/// Seed for the `stream`-th independent child of `root` (splitmix64 finalizer).
/// Workers and realizations each get their own stream so results do not depend on
/// scheduling.
inline uint64_t derive_seed(uint64_t root, uint64_t stream) {
    uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(uint64_t root, uint64_t stream = 0) {
    return Rng(derive_seed(root, stream));
}

}  // namespace shadowframe

#endif
