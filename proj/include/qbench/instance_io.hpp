// Copyright 2026 The qbench Authors
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

/**
 * @file
 * Instance files: one JSON object per line,
 * {"kind":..., "n":..., "seed":..., "payload":{...}}.
 * Reals are written in shortest round-trip form, so files round-trip bit-exactly.
 */
#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbench/problems.hpp"

namespace qbench {

class InstanceFormatError : public std::runtime_error {
  public:
    InstanceFormatError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline nlohmann::ordered_json to_json(const ProblemInstance &p) {
    using nlohmann::ordered_json;
    ordered_json payload = ordered_json::object();
    switch (p.kind) {
    case ProblemKind::MaxCut: {
        ordered_json edges = ordered_json::array();
        for (const auto &e : p.as<MaxCutData>().edges) edges.push_back({e.u, e.v});
        payload["edges"] = std::move(edges);
        payload["edge_probability"] = p.as<MaxCutData>().edge_probability;
        break;
    }
    case ProblemKind::NumberPartition:
        payload["numbers"] = p.as<NumberPartitionData>().numbers;
        break;
    case ProblemKind::Knapsack: {
        const auto &d = p.as<KnapsackData>();
        payload["weights"] = d.weights;
        payload["values"] = d.values;
        payload["capacity"] = d.capacity;
        payload["penalty"] = d.penalty;
        break;
    }
    case ProblemKind::SpinGlass: {
        const auto &d = p.as<SpinGlassData>();
        ordered_json couplings = ordered_json::array();
        for (const auto &c : d.couplings) couplings.push_back({c.i, c.j, c.jx, c.jy, c.jz});
        payload["couplings"] = std::move(couplings);
        payload["mu"] = d.mu;
        payload["sigma"] = d.sigma;
        break;
    }
    }
    ordered_json j;
    j["kind"] = std::string(to_string(p.kind));
    j["n"] = p.n;
    j["seed"] = p.seed;
    j["payload"] = std::move(payload);
    return j;
}

inline ProblemInstance instance_from_json(const nlohmann::ordered_json &j) {
    const auto kind = parse_problem_kind(j.at("kind").get<std::string>());
    if (!kind) {
        throw std::invalid_argument("unknown kind '" + j.at("kind").get<std::string>() +
                                    "' (valid kinds: " + std::string(kValidKindsText) + ")");
    }
    const auto n = j.at("n").get<std::size_t>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto &pl = j.at("payload");
    ProblemInstance p{*kind, n, seed, MaxCutData{}};
    switch (*kind) {
    case ProblemKind::MaxCut: {
        MaxCutData d;
        for (const auto &e : pl.at("edges")) d.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
        d.edge_probability = pl.at("edge_probability").get<double>();
        p.payload = std::move(d);
        break;
    }
    case ProblemKind::NumberPartition:
        p.payload = NumberPartitionData{pl.at("numbers").get<std::vector<std::int64_t>>()};
        break;
    case ProblemKind::Knapsack:
        p.payload = KnapsackData{pl.at("weights").get<std::vector<std::int64_t>>(),
                                 pl.at("values").get<std::vector<std::int64_t>>(),
                                 pl.at("capacity").get<std::int64_t>(), pl.at("penalty").get<double>()};
        break;
    case ProblemKind::SpinGlass: {
        SpinGlassData d;
        for (const auto &c : pl.at("couplings")) {
            d.couplings.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>(), c.at(2).get<double>(),
                                   c.at(3).get<double>(), c.at(4).get<double>()});
        }
        d.mu = pl.at("mu").get<double>();
        d.sigma = pl.at("sigma").get<double>();
        p.payload = std::move(d);
        break;
    }
    }
    validate(p);
    return p;
}

inline void write_instances(std::ostream &os, const std::vector<ProblemInstance> &instances) {
    for (const auto &p : instances) os << to_json(p).dump() << '\n';
}

/// Blank lines are skipped; any other malformed line throws InstanceFormatError.
inline std::vector<ProblemInstance> read_instances(std::istream &is) {
    std::vector<ProblemInstance> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(instance_from_json(nlohmann::ordered_json::parse(line)));
        } catch (const std::exception &e) {
            throw InstanceFormatError(lineno, e.what());
        }
    }
    return out;
}

} // namespace qbench
