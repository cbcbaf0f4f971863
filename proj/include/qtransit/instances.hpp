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
#include <string>

#include "json.hpp"
#include "qtransit/encoders.hpp"

namespace qtransit {

// Seeded generators: points placed uniformly on the unit square, Euclidean
// travel/service costs.
TspInstance make_tsp(int n_cities, std::uint64_t seed, bool fixed_depot = true);
VrpInstance make_vrp(int n_nodes, int fleet, std::uint64_t seed);
/// Setup costs are drawn uniformly from [0.5, 1.0].
FlpInstance make_flp(int n_customers, int n_facilities, std::uint64_t seed);

/// The three benchmark-scale instances (TSP 5 cities, VRP depot + 4 stops
/// with 2 vehicles, FLP 5 customers x 2 facilities) with pinned seeds.
Instance benchmark_instance(ProblemKind kind);

nlohmann::json instance_to_json(const Instance &inst);
Instance instance_from_json(const nlohmann::json &j);
Instance load_instance(const std::string &path);
void save_instance(const Instance &inst, const std::string &path);

}  // namespace qtransit
