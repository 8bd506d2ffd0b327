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

// qbench: generate instance suites, run the algorithm matrix, sweep QAOA, and
// summarize results.
//
// Exit codes: 0 success, 2 usage or input error, 3 some runs failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbench/bench.hpp"
#include "qbench/config.hpp"
#include "qbench/instance_io.hpp"

namespace {

using namespace qbench;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string &s, const std::string &what) {
    std::vector<std::size_t> out;
    for (const auto &item : split_list(s)) {
        if (item.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("bad " + what + " value '" + item + "'");
        }
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw UsageError(what + " list is empty");
    return out;
}

ProblemKind kind_or_throw(const std::string &s) {
    const auto k = parse_problem_kind(s);
    if (!k) throw UsageError("unknown problem kind '" + s + "' (valid kinds: " + std::string(kValidKindsText) + ")");
    return *k;
}

std::vector<Algorithm> parse_algorithms(const std::string &s) {
    std::vector<Algorithm> out;
    for (const auto &name : split_list(s)) {
        if (name == "all") {
            out.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
            continue;
        }
        if (name == "qa_hw" || name.rfind("qa_hw", 0) == 0) throw UsageError("hardware backends unsupported");
        const auto a = parse_algorithm(name);
        if (!a) throw UsageError("unknown algorithm '" + name + "'");
        if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
    }
    if (out.empty()) throw UsageError("no algorithms selected");
    return out;
}

template <typename T> void overlay(T &dst, const std::optional<T> &src) {
    if (src) dst = *src;
}

// Built-in defaults < configuration file < flags.
struct CommonFlags {
    std::optional<std::string> config_path;
    CliConfig resolve() const {
        CliConfig cfg;
        std::optional<std::string> path = config_path;
        if (!path) {
            if (const char *env = std::getenv("QBENCH_CONFIG"); env && *env) path = env;
        }
        if (path) load_config_file(cfg, *path);
        return cfg;
    }
};

void add_config_option(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file (default: $QBENCH_CONFIG)");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Benchmarks non-fault-tolerant quantum optimization algorithms on small problem suites"};
    app.require_subcommand(1);

    // gen
    CommonFlags gen_flags;
    std::string gen_kind;
    std::optional<std::size_t> gen_count, gen_n;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen", "Generate an instance suite");
    gen->add_option("kind", gen_kind, "maxcut, numpart, knapsack or spinglass")->required();
    gen->add_option("--count", gen_count, "Number of instances (default 250)");
    gen->add_option("--n", gen_n, "Problem size (default 5)");
    gen->add_option("--seed", gen_seed, "Base seed; instance i uses seed + i (default 0)");
    gen->add_option("-o,--out", gen_out, "Output instance file")->required();
    add_config_option(gen, gen_flags);

    // run
    CommonFlags run_flags;
    std::string run_in, run_algos = "all", run_out;
    std::optional<std::size_t> run_workers;
    bool run_resume = false, run_diag = false, run_no_timing = false;
    std::optional<std::string> run_traj;
    auto *run = app.add_subcommand("run", "Run algorithms over an instance file");
    run->add_option("instances", run_in, "Instance file")->required();
    run->add_option("--algo", run_algos, "Comma-separated algorithm tags or 'all'");
    run->add_option("-o,--out", run_out, "Results CSV")->required();
    run->add_option("--workers", run_workers, "Concurrent runs (default: available parallelism)");
    run->add_flag("--resume", run_resume, "Skip pairs already present in the results file");
    run->add_flag("--diagonal-part", run_diag, "Anneal only the Z-type part of non-diagonal Hamiltonians");
    run->add_flag("--no-timing", run_no_timing, "Leave wall_time_s empty for byte-reproducible output");
    run->add_option("--trajectory-dir", run_traj, "Write per-run trajectory CSVs here");
    add_config_option(run, run_flags);

    // sweep
    CommonFlags sweep_flags;
    std::string sweep_kind, sweep_p, sweep_n, sweep_out;
    std::optional<std::size_t> sweep_per_cell;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::string> sweep_table;
    auto *sweep = app.add_subcommand("sweep", "QAOA fidelity over depth p and size n");
    sweep->add_option("kind", sweep_kind, "Problem kind")->required();
    sweep->add_option("--p", sweep_p, "Comma-separated depths")->required();
    sweep->add_option("--n", sweep_n, "Comma-separated sizes (each <= 12)")->required();
    sweep->add_option("--per-cell", sweep_per_cell, "Instances per (p, n) cell (default 20)");
    sweep->add_option("--seed", sweep_seed, "Base seed (default 0)");
    sweep->add_option("-o,--out", sweep_out, "Results CSV")->required();
    sweep->add_option("--table", sweep_table, "p x n table CSV (default: <out>.table.csv)");
    add_config_option(sweep, sweep_flags);

    // report
    std::string report_in, report_dir;
    auto *report = app.add_subcommand("report", "Summarize a results CSV");
    report->add_option("results", report_in, "Results CSV")->required();
    report->add_option("-o,--out-dir", report_dir, "Directory for summary.csv and boxplot.svg")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            CliConfig cfg = gen_flags.resolve();
            overlay(cfg.count, gen_count);
            overlay(cfg.n, gen_n);
            overlay(cfg.seed, gen_seed);
            const ProblemKind kind = kind_or_throw(gen_kind);
            if (cfg.count < 1) throw UsageError("--count must be >= 1");
            const auto suite = make_suite(kind, cfg.count, cfg.n, cfg.seed, cfg.gen);
            std::ofstream os(gen_out, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + gen_out);
            write_instances(os, suite);
            std::cout << "wrote " << suite.size() << " " << to_string(kind) << " instances (seed " << cfg.seed
                      << ") to " << gen_out << "\n";
            return kExitOk;
        }

        if (*run) {
            CliConfig cfg = run_flags.resolve();
            overlay(cfg.workers, run_workers);
            if (run_diag) cfg.bench.diagonal_part = true;
            if (run_no_timing) cfg.bench.no_timing = true;
            if (run_traj) cfg.bench.trajectory_dir = *run_traj;
            const auto algos = parse_algorithms(run_algos);
            std::ifstream is(run_in, std::ios::binary);
            if (!is) throw UsageError("cannot read instance file " + run_in);
            std::vector<ProblemInstance> instances;
            try {
                instances = read_instances(is);
            } catch (const InstanceFormatError &e) {
                throw UsageError(run_in + ": " + e.what());
            }
            if (instances.empty()) throw UsageError("instance file " + run_in + " is empty");
            MatrixOptions mo;
            mo.workers = cfg.workers;
            mo.resume = run_resume;
            MatrixOutcome outcome;
            try {
                outcome = run_matrix(instances, algos, cfg.bench, run_out, mo);
            } catch (const ResultsFormatError &e) {
                throw UsageError(run_out + ": " + e.what());
            }
            std::cout << outcome.records.size() << " runs written to " << run_out << " (" << outcome.skipped
                      << " already present, " << outcome.failed << " failed)\n";
            return outcome.failed > 0 ? kExitPartial : kExitOk;
        }

        if (*sweep) {
            CliConfig cfg = sweep_flags.resolve();
            overlay(cfg.seed, sweep_seed);
            const ProblemKind kind = kind_or_throw(sweep_kind);
            const auto ps = parse_sizes(sweep_p, "--p");
            const auto ns = parse_sizes(sweep_n, "--n");
            for (auto n : ns) {
                if (n < 2 || n > 12) throw UsageError("sweep size " + std::to_string(n) + " outside [2, 12]");
            }
            const std::size_t per_cell = sweep_per_cell.value_or(20);
            if (per_cell < 1) throw UsageError("--per-cell must be >= 1");
            cfg.bench.no_timing = true;
            const auto rows = sweep_qaoa(kind, ps, ns, per_cell, cfg.seed, cfg.bench, cfg.gen);
            std::ofstream os(sweep_out, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + sweep_out);
            os << kResultsHeader << '\n';
            std::size_t failed = 0;
            for (const auto &r : rows) {
                os << format_record(r.record) << '\n';
                if (!r.record.ok()) ++failed;
            }
            const std::string table_path = sweep_table.value_or(sweep_out + ".table.csv");
            std::ofstream ts(table_path, std::ios::binary);
            if (!ts) throw std::runtime_error("cannot write " + table_path);
            write_sweep_table(ts, kind, rows);
            std::ostringstream table;
            write_sweep_table(table, kind, rows);
            std::cout << table.str();
            std::cout << rows.size() << " runs written to " << sweep_out << ", table in " << table_path << "\n";
            return failed > 0 ? kExitPartial : kExitOk;
        }

        if (*report) {
            std::ifstream is(report_in, std::ios::binary);
            if (!is) throw UsageError("cannot read results file " + report_in);
            std::vector<RunRecord> records;
            try {
                records = read_results(is);
            } catch (const ResultsFormatError &e) {
                throw UsageError(report_in + ": " + e.what());
            }
            if (records.empty()) throw UsageError("results file " + report_in + " has no records");
            const SummaryStats stats = aggregate(records);
            for (const auto &[k, a] : stats.skipped) {
                std::cerr << "warning: no successful runs for " << to_string(k) << "/" << to_string(a) << "\n";
            }
            std::filesystem::create_directories(report_dir);
            const auto dir = std::filesystem::path(report_dir);
            {
                std::ofstream os(dir / "summary.csv", std::ios::binary);
                write_summary_csv(os, stats);
            }
            {
                std::ofstream os(dir / "boxplot.svg", std::ios::binary);
                os << render_boxplot(stats);
            }
            for (const auto &r : stats.rows) {
                std::cout << to_string(r.kind) << " " << panel_label(r.kind, r.algorithm)
                          << " median=" << format_real(r.median) << " (n=" << r.count << ")\n";
            }
            return kExitOk;
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
