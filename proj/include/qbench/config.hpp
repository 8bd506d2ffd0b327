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
 * Flat JSON configuration files: one object whose keys mirror the module
 * defaults. Unknown keys are rejected by name.
 */
#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

#include <json.hpp>

#include "qbench/bench.hpp"

namespace qbench {

struct CliConfig {
    BenchConfig bench{};
    GenParams gen{};
    std::size_t count = 250;
    std::size_t n = 5;
    std::uint64_t seed = 0;
    std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using Setter = std::function<void(CliConfig &, const nlohmann::json &)>;

template <typename T> Setter set(T CliConfig::*field) {
    return [field](CliConfig &c, const nlohmann::json &v) { c.*field = v.get<T>(); };
}
template <typename T> Setter set_bench(T BenchConfig::*field) {
    return [field](CliConfig &c, const nlohmann::json &v) { c.bench.*field = v.get<T>(); };
}
template <typename T> Setter set_gen(T GenParams::*field) {
    return [field](CliConfig &c, const nlohmann::json &v) { c.gen.*field = v.get<T>(); };
}

inline Setter set_time(ProblemKind k, bool is_dt) {
    return [k, is_dt](CliConfig &c, const nlohmann::json &v) {
        auto cur = c.bench.dt_T(k);
        (is_dt ? cur.first : cur.second) = v.get<double>();
        c.bench.imag_time[k] = cur;
    };
}

inline const std::map<std::string, Setter> &config_keys() {
    static const std::map<std::string, Setter> keys = [] {
        std::map<std::string, Setter> m{
            {"count", set(&CliConfig::count)},
            {"n", set(&CliConfig::n)},
            {"seed", set(&CliConfig::seed)},
            {"workers", set(&CliConfig::workers)},
            {"p", set_bench(&BenchConfig::qaoa_p)},
            {"vqe_reps", set_bench(&BenchConfig::vqe_reps)},
            {"budget", set_bench(&BenchConfig::budget)},
            {"ansatz_reps", set_bench(&BenchConfig::ansatz_reps)},
            {"lambda", set_bench(&BenchConfig::lambda)},
            {"qa_T", set_bench(&BenchConfig::qa_T)},
            {"qa_dt", set_bench(&BenchConfig::qa_dt)},
            {"sa_sweeps", set_bench(&BenchConfig::sa_sweeps)},
            {"sa_shots", set_bench(&BenchConfig::sa_shots)},
            {"diagonal_part", set_bench(&BenchConfig::diagonal_part)},
            {"edge_probability", set_gen(&GenParams::edge_probability)},
            {"numpart_max", set_gen(&GenParams::numpart_max)},
            {"knapsack_value_max", set_gen(&GenParams::knapsack_value_max)},
            {"knapsack_weight_max", set_gen(&GenParams::knapsack_weight_max)},
            {"spinglass_mu", set_gen(&GenParams::spinglass_mu)},
            {"spinglass_sigma", set_gen(&GenParams::spinglass_sigma)},
        };
        for (ProblemKind k : kAllProblemKinds) {
            const std::string name(to_string(k));
            m[name + "_dt"] = set_time(k, true);
            m[name + "_T"] = set_time(k, false);
        }
        return m;
    }();
    return keys;
}

} // namespace detail

inline void apply_config(CliConfig &cfg, const nlohmann::json &j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    const auto &keys = detail::config_keys();
    for (const auto &[key, value] : j.items()) {
        auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("unknown configuration key '" + key + "'");
        try {
            it->second(cfg, value);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("bad value for configuration key '" + key + "': " + e.what());
        }
    }
}

inline void load_config_file(CliConfig &cfg, const std::string &path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read configuration file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("configuration file " + path + ": " + e.what());
    }
    apply_config(cfg, j);
}

} // namespace qbench
