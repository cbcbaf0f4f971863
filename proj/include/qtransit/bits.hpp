// Copyright 2026 The qtransit Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qtransit {

/// Computational basis index. Variable (qubit) k is bit k, so variable 0 is
/// the least significant bit. Bit value 0 corresponds to spin z = +1.
using Basis = std::uint64_t;

inline int spin(Basis b, int q) { return ((b >> q) & 1U) ? -1 : 1; }
inline int bit(Basis b, int q) { return static_cast<int>((b >> q) & 1U); }

/// Renders `b` as an n-character string whose k-th character is variable k.
std::string to_bitstring(Basis b, int n);

/// Inverse of to_bitstring. Throws std::invalid_argument on non-binary chars
/// or strings longer than 64 characters.
Basis from_bitstring(std::string_view s);

std::uint64_t splitmix64(std::uint64_t &state);

/// Deterministically mixes a base seed with a textual stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();

   private:
    std::mt19937_64 engine_;
};

}  // namespace qtransit
