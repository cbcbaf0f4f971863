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

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qtransit {

using Objective = std::function<double(std::span<const double>)>;

struct DfoOptions {
    double rho_begin = 0.25;
    double rho_end = 1e-3;
    int max_evals = 200;
    /// Stop as soon as an evaluation reaches this value.
    double f_target = -std::numeric_limits<double>::infinity();
    /// Empty bounds mean unbounded; otherwise one entry per coordinate.
    std::vector<double> lower;
    std::vector<double> upper;
};

struct DfoEval {
    std::vector<double> x;
    double f = 0.0;
};

struct DfoResult {
    std::vector<double> x_best;
    double f_best = 0.0;
    int evals = 0;
    std::vector<DfoEval> trace;
    bool used_simplex_fallback = false;
    std::string stop_reason;
};

/// Minimizes f with a trust-region method on linear interpolation models
/// over n+1 points (COBYLA-style without constraints). The radius rho only
/// shrinks. When the model becomes flat on the whole interpolation set the
/// remaining budget is handed to Nelder-Mead on the same simplex.
DfoResult minimize_trust_region(const Objective &f, std::vector<double> x0, const DfoOptions &opts);

/// Bounded Nelder-Mead started from a regular simplex of edge rho_begin.
DfoResult minimize_nelder_mead(const Objective &f, std::vector<double> x0, const DfoOptions &opts);

}  // namespace qtransit
