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

// Built with -ffast-math so the sin/cos calls vectorize.
#include "kernels.hpp"

#include <cmath>

namespace qtransit::kernels {

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx2", "default")))
#endif
void phase(double *__restrict a, const double *__restrict d, std::size_t n, double scale) {
    for (std::size_t z = 0; z < n; z++) {
        const double phi = -scale * d[z];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double x = a[2 * z];
        const double y = a[2 * z + 1];
        a[2 * z] = x * c - y * s;
        a[2 * z + 1] = x * s + y * c;
    }
}

}  // namespace qtransit::kernels
