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

#include "qtransit/bits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtransit {

std::string to_bitstring(Basis b, int n) {
    std::string s(static_cast<size_t>(n), '0');
    for (int k = 0; k < n; k++) {
        if ((b >> k) & 1U) {
            s[static_cast<size_t>(k)] = '1';
        }
    }
    return s;
}

Basis from_bitstring(std::string_view s) {
    if (s.size() > 64) {
        throw std::invalid_argument("bitstring longer than 64 characters");
    }
    Basis b = 0;
    for (size_t k = 0; k < s.size(); k++) {
        if (s[k] == '1') {
            b |= Basis{1} << k;
        } else if (s[k] != '0') {
            throw std::invalid_argument("bitstring contains a character other than 0/1");
        }
    }
    return b;
}

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    // FNV-1a over the tag, then two splitmix rounds with the base.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = base ^ h;
    splitmix64(state);
    return splitmix64(state);
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qtransit
