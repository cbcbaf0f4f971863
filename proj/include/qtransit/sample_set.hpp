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
#include <map>

#include "qtransit/bits.hpp"

namespace qtransit {

/// Multiset of measured basis states. Iteration order over `counts` is by
/// basis index, so every derived quantity is deterministic.
struct SampleSet {
    int n = 0;
    std::map<Basis, std::uint64_t> counts;
    std::uint64_t shots = 0;

    void add(Basis b, std::uint64_t count = 1) {
        if (count == 0) return;
        counts[b] += count;
        shots += count;
    }
    bool empty() const { return shots == 0; }
    void validate() const;
};

}  // namespace qtransit
