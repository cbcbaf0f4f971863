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

#include "qtransit/instances.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qtransit/bits.hpp"

namespace qtransit {

namespace {

struct Point {
    double x;
    double y;
};

std::vector<Point> place(int n, Rng &rng) {
    std::vector<Point> pts(static_cast<size_t>(n));
    for (auto &p : pts) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    return pts;
}

double euclid(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

Matrix distance_matrix(const std::vector<Point> &pts) {
    const size_t n = pts.size();
    Matrix d(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            if (i != j) d[i][j] = euclid(pts[i], pts[j]);
        }
    }
    return d;
}

Matrix matrix_from_json(const nlohmann::json &j, const char *field) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw std::invalid_argument(std::string("instance: missing matrix field '") + field + "'");
    }
    return j[field].get<Matrix>();
}

}  // namespace

TspInstance make_tsp(int n_cities, std::uint64_t seed, bool fixed_depot) {
    Rng rng(derive_seed(seed, "tsp"));
    TspInstance inst{n_cities, distance_matrix(place(n_cities, rng)), fixed_depot};
    inst.validate();
    return inst;
}

VrpInstance make_vrp(int n_nodes, int fleet, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "vrp"));
    VrpInstance inst{n_nodes, distance_matrix(place(n_nodes, rng)), fleet};
    inst.validate();
    return inst;
}

FlpInstance make_flp(int n_customers, int n_facilities, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "flp"));
    auto customers = place(n_customers, rng);
    auto facilities = place(n_facilities, rng);
    FlpInstance inst;
    inst.n_customers = n_customers;
    inst.n_facilities = n_facilities;
    for (int j = 0; j < n_facilities; j++) inst.setup.push_back(rng.uniform(0.5, 1.0));
    inst.service.assign(n_customers, std::vector<double>(n_facilities, 0.0));
    for (int i = 0; i < n_customers; i++) {
        for (int j = 0; j < n_facilities; j++) inst.service[i][j] = euclid(customers[i], facilities[j]);
    }
    inst.validate();
    return inst;
}

Instance benchmark_instance(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::kTsp:
            return make_tsp(5, 11);
        case ProblemKind::kVrp:
            return make_vrp(5, 2, 12);
        case ProblemKind::kFlp:
            return make_flp(5, 2, 13);
    }
    throw std::invalid_argument("unknown problem kind");
}

nlohmann::json instance_to_json(const Instance &inst) {
    nlohmann::json j;
    std::visit(
        [&](const auto &i) {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, TspInstance>) {
                j["type"] = "tsp";
                j["n_cities"] = i.n_cities;
                j["dist"] = i.dist;
                j["fixed_depot"] = i.fixed_depot;
            } else if constexpr (std::is_same_v<T, VrpInstance>) {
                j["type"] = "vrp";
                j["n_nodes"] = i.n_nodes;
                j["weights"] = i.weights;
                j["fleet"] = i.fleet;
            } else {
                j["type"] = "flp";
                j["n_customers"] = i.n_customers;
                j["n_facilities"] = i.n_facilities;
                j["setup"] = i.setup;
                j["service"] = i.service;
            }
        },
        inst);
    return j;
}

Instance instance_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("type")) {
        throw std::invalid_argument("instance: expected a JSON object with a \"type\" field");
    }
    switch (problem_kind_from_string(j.at("type").get<std::string>())) {
        case ProblemKind::kTsp: {
            TspInstance t;
            t.dist = matrix_from_json(j, "dist");
            t.n_cities = j.value("n_cities", static_cast<int>(t.dist.size()));
            t.fixed_depot = j.value("fixed_depot", true);
            t.validate();
            return t;
        }
        case ProblemKind::kVrp: {
            VrpInstance v;
            v.weights = matrix_from_json(j, "weights");
            v.n_nodes = j.value("n_nodes", static_cast<int>(v.weights.size()));
            v.fleet = j.at("fleet").get<int>();
            v.validate();
            return v;
        }
        case ProblemKind::kFlp: {
            FlpInstance f;
            f.service = matrix_from_json(j, "service");
            f.setup = j.at("setup").get<std::vector<double>>();
            f.n_customers = j.value("n_customers", static_cast<int>(f.service.size()));
            f.n_facilities = j.value("n_facilities", static_cast<int>(f.setup.size()));
            f.validate();
            return f;
        }
    }
    throw std::invalid_argument("instance: unreachable");
}

Instance load_instance(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("instance file '" + path + "' is not valid JSON: " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const Instance &inst, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write instance file '" + path + "'");
    }
    out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace qtransit
