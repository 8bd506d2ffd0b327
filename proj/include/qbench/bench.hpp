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
 * Benchmark harness: suites, algorithm dispatch, scoring, the results CSV
 * (ordered, resumable writes), aggregation into quartile summaries, box-plot
 * SVG, and the QAOA depth/size sweep.
 */
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "qbench/annealer.hpp"
#include "qbench/dynamics.hpp"
#include "qbench/format.hpp"
#include "qbench/problems.hpp"
#include "qbench/qite.hpp"
#include "qbench/statevector.hpp"
#include "qbench/variational.hpp"

namespace qbench {

// ---------------------------------------------------------------------------
// Algorithms and configuration

enum class Algorithm { Vqe, Qaoa, QiteA, QiteAf, ItqaA, ItqaAf, QiteSim, ItqaSim, QiteTn, ItqaTn, QaSim, Sa };

inline constexpr std::array<Algorithm, 12> kAllAlgorithms{
    Algorithm::Vqe,     Algorithm::Qaoa,    Algorithm::QiteA,  Algorithm::QiteAf,
    Algorithm::ItqaA,   Algorithm::ItqaAf,  Algorithm::QiteSim, Algorithm::ItqaSim,
    Algorithm::QiteTn,  Algorithm::ItqaTn,  Algorithm::QaSim,  Algorithm::Sa};

inline std::string_view to_string(Algorithm a) {
    constexpr std::array<std::string_view, 12> names{"vqe",      "qaoa",     "qite_a",  "qite_af",
                                                     "itqa_a",   "itqa_af",  "qite_sim", "itqa_sim",
                                                     "qite_tn",  "itqa_tn",  "qa_sim",  "sa"};
    return names[static_cast<std::size_t>(a)];
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
    for (Algorithm a : kAllAlgorithms) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

/// Sampled solvers report a success fraction.
inline bool is_sampler(Algorithm a) { return a == Algorithm::Sa; }
inline bool consumes_seed(Algorithm a) {
    return a == Algorithm::Vqe || a == Algorithm::Qaoa || a == Algorithm::QiteA || a == Algorithm::ItqaA ||
           a == Algorithm::Sa;
}

struct ScheduleParams {
    double dt;
    double T;
    std::size_t steps;
};

inline ScheduleParams default_schedule_params(ProblemKind k) {
    switch (k) {
    case ProblemKind::MaxCut:
    case ProblemKind::SpinGlass:
        return {1e-1, 1e3, 10000};
    case ProblemKind::NumberPartition:
        return {1e-5, 0.2, 20000};
    case ProblemKind::Knapsack:
        return {1e-7, 1e-3, 10000};
    }
    throw std::invalid_argument("unknown problem kind");
}

struct GenParams {
    double edge_probability = 0.5;
    std::int64_t numpart_max = 100;
    std::int64_t knapsack_value_max = 50;
    std::int64_t knapsack_weight_max = 50;
    double spinglass_mu = 0.0;
    double spinglass_sigma = 0.3;
};

struct BenchConfig {
    std::size_t qaoa_p = 100;
    std::size_t vqe_reps = 2;
    std::size_t budget = 5000;
    std::size_t ansatz_reps = 2;
    double lambda = kDefaultRegularization;
    /// Per-kind imaginary-time overrides; unset entries use default_schedule_params.
    std::map<ProblemKind, std::pair<double, double>> imag_time{};
    double qa_T = 20.0;
    double qa_dt = 1e-2;
    std::size_t sa_sweeps = 10000;
    std::size_t sa_shots = 1000;
    /// Anneal only the Z-type part of non-diagonal Hamiltonians.
    bool diagonal_part = false;
    /// Write an empty wall_time_s column (byte-reproducible output).
    bool no_timing = false;
    std::optional<std::filesystem::path> trajectory_dir{};

    [[nodiscard]] std::pair<double, double> dt_T(ProblemKind k) const {
        if (auto it = imag_time.find(k); it != imag_time.end()) return it->second;
        const auto d = default_schedule_params(k);
        return {d.dt, d.T};
    }
};

/// Key=value summary of every setting that influences (kind, algorithm).
inline std::string config_snapshot(const BenchConfig &cfg, ProblemKind kind, Algorithm a) {
    std::ostringstream os;
    os << "algorithm=" << to_string(a) << ";kind=" << to_string(kind);
    const auto [dt, T] = cfg.dt_T(kind);
    switch (a) {
    case Algorithm::Vqe:
        os << ";reps=" << cfg.vqe_reps << ";budget=" << cfg.budget << ";optimizer=spsa";
        break;
    case Algorithm::Qaoa:
        os << ";p=" << cfg.qaoa_p << ";budget=" << cfg.budget << ";optimizer=simplex";
        break;
    case Algorithm::QiteA:
    case Algorithm::ItqaA:
        os << ";dt=" << format_real(dt) << ";T=" << format_real(T) << ";lambda=" << format_real(cfg.lambda)
           << ";reps=" << cfg.ansatz_reps;
        break;
    case Algorithm::QiteAf:
    case Algorithm::ItqaAf:
        os << ";dt=" << format_real(dt) << ";T=" << format_real(T) << ";lambda=" << format_real(cfg.lambda)
           << ";basis=full";
        break;
    case Algorithm::QiteSim:
    case Algorithm::ItqaSim:
        os << ";dt=" << format_real(dt) << ";T=" << format_real(T);
        break;
    case Algorithm::QiteTn:
    case Algorithm::ItqaTn:
        os << ";dt=" << format_real(dt) << ";T=" << format_real(T) << ";chi=n";
        break;
    case Algorithm::QaSim:
        os << ";T=" << format_real(cfg.qa_T) << ";dt=" << format_real(cfg.qa_dt) << ";scale=max_coeff";
        break;
    case Algorithm::Sa:
        os << ";sweeps=" << cfg.sa_sweeps << ";shots=" << cfg.sa_shots
           << ";diagonal_part=" << (cfg.diagonal_part ? 1 : 0);
        break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Suites

inline ProblemInstance generate_instance(ProblemKind kind, std::size_t n, std::uint64_t seed,
                                         const GenParams &g = {}) {
    switch (kind) {
    case ProblemKind::MaxCut:
        return gen_maxcut(n, g.edge_probability, seed);
    case ProblemKind::NumberPartition:
        return gen_numpart(n, g.numpart_max, seed);
    case ProblemKind::Knapsack:
        return gen_knapsack(n, g.knapsack_value_max, g.knapsack_weight_max, seed);
    case ProblemKind::SpinGlass:
        return gen_spinglass(n, seed, g.spinglass_mu, g.spinglass_sigma);
    }
    throw std::invalid_argument("unknown problem kind");
}

/// Instance i uses seed base_seed + i.
inline std::vector<ProblemInstance> make_suite(ProblemKind kind, std::size_t count = 250, std::size_t n = 5,
                                               std::uint64_t base_seed = 0, const GenParams &g = {}) {
    if (count < 1) throw std::invalid_argument("suite count must be >= 1");
    std::vector<ProblemInstance> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(generate_instance(kind, n, base_seed + i, g));
    return out;
}

// ---------------------------------------------------------------------------
// Records

struct RunRecord {
    std::string instance_id;
    ProblemKind kind = ProblemKind::MaxCut;
    std::size_t n = 0;
    Algorithm algorithm = Algorithm::Vqe;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> success_fraction{};
    double final_energy = std::numeric_limits<double>::quiet_NaN();
    double ground_energy = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> wall_time_s{};
    std::uint64_t seed = 0;
    std::string config_hash;
    /// Set when the run failed.
    std::optional<std::string> error{};

    [[nodiscard]] bool ok() const { return !error.has_value(); }
};

inline constexpr std::string_view kResultsHeader =
    "instance_id,kind,n,algorithm,fidelity,success_fraction,final_energy,ground_energy,wall_time_s,seed,config_hash";

struct Score {
    double fidelity;
    std::optional<double> success_fraction;
};

/// State-based score: ground-subspace population.
inline Score score(const StateVector &s, const GroundTruth &truth) {
    if (truth.subspace.empty()) throw std::invalid_argument("score: ground truth has no subspace");
    return {fidelity_to_subspace(s, truth.subspace), std::nullopt};
}

/// Sample-based score: share of shots on an optimal bitstring, reported as the fidelity too.
inline Score score(const Counts &samples, const GroundTruth &truth) {
    if (truth.optimal_bitstrings.empty()) throw std::invalid_argument("score: ground truth has no optimal bitstrings");
    std::size_t total = 0;
    std::size_t hits = 0;
    for (const auto &[b, c] : samples) {
        total += c;
        if (std::find(truth.optimal_bitstrings.begin(), truth.optimal_bitstrings.end(), b) !=
            truth.optimal_bitstrings.end()) {
            hits += c;
        }
    }
    if (total == 0) throw std::invalid_argument("score: no samples");
    const double f = static_cast<double>(hits) / static_cast<double>(total);
    return {f, f};
}

namespace detail {

inline std::string sanitize_error(std::string msg) {
    std::string out;
    for (char c : msg) {
        if (c == ',' || c == '\n' || c == '\r') continue;
        out.push_back(c);
    }
    return out;
}

inline std::uint64_t run_seed(const ProblemInstance &p, Algorithm a) {
    return splitmix64(p.seed ^ fnv1a64(to_string(a)));
}

inline void save_trajectory(const BenchConfig &cfg, const ProblemInstance &p, Algorithm a, const Trajectory &tr,
                            const std::function<void(std::ostream &)> &meta = {}) {
    if (!cfg.trajectory_dir) return;
    std::filesystem::create_directories(*cfg.trajectory_dir);
    const std::string stem = p.id() + "_" + std::string(to_string(a));
    std::ofstream os(*cfg.trajectory_dir / (stem + ".csv"), std::ios::binary);
    write_trajectory_csv(os, tr);
    if (meta) {
        std::ofstream ms(*cfg.trajectory_dir / (stem + ".meta.json"), std::ios::binary);
        meta(ms);
    }
}

/// Problem Hamiltonian for real-time annealing: identity dropped, scaled so the
/// largest remaining coefficient magnitude is at most 1.
inline PauliSum qa_problem_scaled(const PauliSum &h) {
    PauliSum out(h.n_qubits());
    for (const auto &t : h.terms()) {
        if (!t.is_identity()) out.add(t);
    }
    const double m = std::max(1.0, out.max_nonidentity_coefficient());
    return simplify(out * (1.0 / m));
}

} // namespace detail

/// Runs one (instance, algorithm) cell. Failures are captured in the record.
inline RunRecord run_one(const ProblemInstance &p, const PauliSum &h, const GroundTruth &truth, Algorithm a,
                         const BenchConfig &cfg) {
    RunRecord r;
    r.instance_id = p.id();
    r.kind = p.kind;
    r.n = p.n;
    r.algorithm = a;
    r.ground_energy = truth.energy;
    r.seed = consumes_seed(a) ? detail::run_seed(p, a) : 0;
    r.config_hash = hex64(fnv1a64(config_snapshot(cfg, p.kind, a)));
    const auto start = std::chrono::steady_clock::now();
    try {
        const SubspaceProjector projector(truth.subspace);
        const CompiledOperator hop(h);
        auto finish_state = [&](const StateVector &s) {
            r.fidelity = projector.fidelity(s);
            r.final_energy = hop.expectation(s);
        };
        const auto [dt, T] = cfg.dt_T(p.kind);
        const ObserveOptions observe{&projector, 0};
        switch (a) {
        case Algorithm::Vqe: {
            VariationalConfig vc;
            vc.reps = cfg.vqe_reps;
            vc.budget = cfg.budget;
            vc.seed = r.seed;
            finish_state(run_vqe(h, vc).state);
            break;
        }
        case Algorithm::Qaoa: {
            VariationalConfig vc;
            vc.p = cfg.qaoa_p;
            vc.budget = cfg.budget;
            vc.seed = r.seed;
            finish_state(run_qaoa(h, vc).state);
            break;
        }
        case Algorithm::QiteA:
        case Algorithm::ItqaA:
        case Algorithm::QiteAf:
        case Algorithm::ItqaAf: {
            QiteConfig qc;
            qc.mode = (a == Algorithm::QiteA || a == Algorithm::ItqaA) ? QiteMode::AnsatzBased : QiteMode::AnsatzFree;
            qc.schedule = (a == Algorithm::QiteA || a == Algorithm::QiteAf) ? ScheduleKind::Constant : ScheduleKind::Qa;
            qc.dt = dt;
            qc.T = T;
            qc.lambda = cfg.lambda;
            qc.reps = cfg.ansatz_reps;
            qc.seed = r.seed;
            const QiteRun run = run_qite(h, qc, &projector);
            detail::save_trajectory(cfg, p, a, run.trajectory,
                                    [&](std::ostream &os) { write_qite_metadata(os, qc, run); });
            finish_state(run.trajectory.final_state);
            break;
        }
        case Algorithm::QiteSim:
        case Algorithm::ItqaSim:
        case Algorithm::QiteTn:
        case Algorithm::ItqaTn: {
            const bool constant = a == Algorithm::QiteSim || a == Algorithm::QiteTn;
            const Schedule sched = constant ? constant_schedule(h, T) : qa_schedule(h, T);
            ImagTimeOptions opts;
            opts.observe = observe;
            if (a == Algorithm::QiteTn || a == Algorithm::ItqaTn) opts.bond_dimension = p.n;
            const Trajectory tr = imag_time_evolve(sched, plus_state(p.n), dt, opts);
            detail::save_trajectory(cfg, p, a, tr);
            finish_state(tr.final_state);
            break;
        }
        case Algorithm::QaSim: {
            const Schedule sched = qa_schedule(detail::qa_problem_scaled(h), cfg.qa_T);
            const Trajectory tr = real_time_evolve(sched, plus_state(p.n), cfg.qa_dt, observe);
            detail::save_trajectory(cfg, p, a, tr);
            finish_state(tr.final_state);
            break;
        }
        case Algorithm::Sa: {
            SaConfig sc;
            sc.sweeps = cfg.sa_sweeps;
            sc.shots = cfg.sa_shots;
            sc.seed = r.seed;
            if (!h.is_diagonal()) {
                if (!cfg.diagonal_part) {
                    throw std::invalid_argument(
                        "simulated annealing needs a diagonal Hamiltonian (enable diagonal-part mode)");
                }
                // Anneal the Z-type part; score the shots' basis states against the true ground subspace.
                const SaResult res = sa_solve(diagonal_part(h), sc);
                double fid = 0.0;
                double best = std::numeric_limits<double>::infinity();
                for (const auto &[b, c] : res.counts) {
                    const StateVector basis = StateVector::basis(p.n, b);
                    fid += static_cast<double>(c) * projector.fidelity(basis);
                    best = std::min(best, hop.expectation(basis));
                }
                r.fidelity = fid / static_cast<double>(sc.shots);
                r.final_energy = best;
                break;
            }
            const SaResult res = sa_solve(h, sc, truth.optimal_bitstrings);
            const Score s = score(res.counts, truth);
            r.fidelity = s.fidelity;
            r.success_fraction = s.success_fraction;
            r.final_energy = res.best_energy;
            break;
        }
        }
        if (!(r.fidelity >= 0.0 && r.fidelity <= 1.0)) throw std::runtime_error("fidelity outside [0 1]");
        if (r.final_energy < truth.energy - 1e-6 * std::max(1.0, std::abs(truth.energy))) {
            throw std::runtime_error("final energy below the ground energy");
        }
    } catch (const std::exception &e) {
        r.error = detail::sanitize_error(e.what());
        r.fidelity = std::numeric_limits<double>::quiet_NaN();
        r.final_energy = std::numeric_limits<double>::quiet_NaN();
        r.success_fraction.reset();
    }
    if (!cfg.no_timing) {
        r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Results CSV

inline std::string format_record(const RunRecord &r) {
    std::ostringstream os;
    os << r.instance_id << ',' << to_string(r.kind) << ',' << r.n << ',' << to_string(r.algorithm) << ','
       << format_real(r.fidelity) << ',';
    if (r.error) {
        os << "error:" << *r.error;
    } else if (r.success_fraction) {
        os << format_real(*r.success_fraction);
    }
    os << ',' << format_real(r.final_energy) << ',' << format_real(r.ground_energy) << ',';
    if (r.wall_time_s) os << format_real(*r.wall_time_s);
    os << ',' << r.seed << ',' << r.config_hash;
    return os.str();
}

class ResultsFormatError : public std::runtime_error {
  public:
    ResultsFormatError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

namespace detail {

inline double parse_real(const std::string &s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string &s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad integer '" + s + "'");
    }
    return std::stoull(s);
}

} // namespace detail

inline RunRecord parse_record(const std::string &line) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            f.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    f.push_back(std::move(cur));
    if (f.size() != 11) throw std::invalid_argument("expected 11 fields, got " + std::to_string(f.size()));
    RunRecord r;
    r.instance_id = f[0];
    const auto kind = parse_problem_kind(f[1]);
    if (!kind) throw std::invalid_argument("unknown kind '" + f[1] + "'");
    r.kind = *kind;
    r.n = static_cast<std::size_t>(detail::parse_uint(f[2]));
    const auto alg = parse_algorithm(f[3]);
    if (!alg) throw std::invalid_argument("unknown algorithm '" + f[3] + "'");
    r.algorithm = *alg;
    r.fidelity = detail::parse_real(f[4]);
    if (f[5].rfind("error:", 0) == 0) {
        r.error = f[5].substr(6);
    } else if (!f[5].empty()) {
        r.success_fraction = detail::parse_real(f[5]);
    }
    r.final_energy = detail::parse_real(f[6]);
    r.ground_energy = detail::parse_real(f[7]);
    if (!f[8].empty()) r.wall_time_s = detail::parse_real(f[8]);
    r.seed = detail::parse_uint(f[9]);
    r.config_hash = f[10];
    if (r.ok() && !(r.fidelity >= 0.0 && r.fidelity <= 1.0)) throw std::invalid_argument("fidelity outside [0, 1]");
    return r;
}

/// Reads a results CSV; a trailing line without a newline is reported via `partial_tail`.
inline std::vector<RunRecord> read_results(std::istream &is, bool *partial_tail = nullptr) {
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::vector<RunRecord> out;
    if (partial_tail) *partial_tail = false;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        const bool complete = nl != std::string::npos;
        std::string line = content.substr(pos, complete ? nl - pos : std::string::npos);
        pos = complete ? nl + 1 : content.size();
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!complete && partial_tail) {
            *partial_tail = true;
            break;
        }
        if (lineno == 1) {
            if (line != kResultsHeader) throw ResultsFormatError(1, "unexpected header");
            continue;
        }
        if (line.empty()) continue;
        try {
            out.push_back(parse_record(line));
        } catch (const std::exception &e) {
            throw ResultsFormatError(lineno, e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Run matrix

struct MatrixOptions {
    std::size_t workers = 1;
    /// Skip (instance, algorithm) pairs already present in the output file.
    bool resume = false;
    /// Called after each record is persisted.
    std::function<void(const RunRecord &)> on_record{};
};

struct MatrixOutcome {
    std::vector<RunRecord> records; ///< newly computed records, in canonical order
    std::size_t skipped = 0;
    std::size_t failed = 0;
};

/**
 * Runs every (instance, algorithm) pair, instance-major. Records are appended
 * to `out_path` in that canonical order regardless of worker scheduling, so an
 * interrupted file is always a prefix of the complete one and resuming
 * reproduces the uninterrupted file byte for byte.
 */
inline MatrixOutcome run_matrix(const std::vector<ProblemInstance> &instances, const std::vector<Algorithm> &algos,
                                const BenchConfig &cfg, const std::filesystem::path &out_path,
                                const MatrixOptions &mopts = {}) {
    std::set<std::pair<std::string, Algorithm>> done;
    bool need_header = true;
    if (mopts.resume && std::filesystem::exists(out_path) && std::filesystem::file_size(out_path) > 0) {
        bool partial = false;
        std::vector<RunRecord> existing;
        {
            std::ifstream is(out_path, std::ios::binary);
            existing = read_results(is, &partial);
        }
        std::uintmax_t keep = 0;
        {
            std::ifstream is(out_path, std::ios::binary);
            std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
            keep = content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1;
        }
        if (partial) std::filesystem::resize_file(out_path, keep);
        need_header = keep == 0;
        for (const auto &r : existing) done.emplace(r.instance_id, r.algorithm);
    }

    struct Task {
        std::size_t instance;
        Algorithm algorithm;
    };
    std::vector<Task> tasks;
    MatrixOutcome outcome;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (Algorithm a : algos) {
            if (done.count({instances[i].id(), a})) {
                ++outcome.skipped;
                continue;
            }
            tasks.push_back({i, a});
        }
    }

    std::ofstream os(out_path, mopts.resume ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + out_path.string() + " for writing");
    if (need_header) os << kResultsHeader << '\n' << std::flush;
    if (tasks.empty()) return outcome;

    // Hamiltonians and ground truths are computed once per instance, on first use.
    std::vector<std::once_flag> prepared(instances.size());
    std::vector<PauliSum> hams(instances.size(), PauliSum(1));
    std::vector<GroundTruth> truths(instances.size());
    auto prepare = [&](std::size_t i) {
        std::call_once(prepared[i], [&] {
            hams[i] = build_hamiltonian(instances[i]);
            truths[i] = ground_truth(instances[i]);
        });
    };

    std::vector<std::optional<RunRecord>> slots(tasks.size());
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto compute = [&](const Task &t) {
        try {
            prepare(t.instance);
            return run_one(instances[t.instance], hams[t.instance], truths[t.instance], t.algorithm, cfg);
        } catch (const std::exception &e) {
            RunRecord rec;
            rec.instance_id = instances[t.instance].id();
            rec.kind = instances[t.instance].kind;
            rec.n = instances[t.instance].n;
            rec.algorithm = t.algorithm;
            rec.config_hash = hex64(fnv1a64(config_snapshot(cfg, rec.kind, rec.algorithm)));
            rec.error = detail::sanitize_error(e.what());
            return rec;
        }
    };
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            RunRecord rec = compute(tasks[k]);
            {
                std::lock_guard lock(mu);
                slots[k] = std::move(rec);
            }
            ready.notify_one();
        }
    };
    const std::size_t nworkers = std::max<std::size_t>(1, std::min(mopts.workers, tasks.size()));
    std::vector<std::thread> pool;
    if (nworkers > 1) {
        for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    }

    // Writer: flush slots strictly in order. With a single worker it runs inline.
    std::size_t written = 0;
    auto flush_ready = [&] {
        std::unique_lock lock(mu);
        while (written < tasks.size() && slots[written]) {
            RunRecord rec = std::move(*slots[written]);
            slots[written].reset();
            lock.unlock();
            os << format_record(rec) << '\n' << std::flush;
            if (!rec.ok()) ++outcome.failed;
            if (mopts.on_record) mopts.on_record(rec);
            outcome.records.push_back(std::move(rec));
            ++written;
            lock.lock();
        }
    };
    if (nworkers == 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            slots[k] = compute(tasks[k]);
            flush_ready();
        }
    } else {
        while (written < tasks.size()) {
            {
                std::unique_lock lock(mu);
                ready.wait(lock, [&] { return slots[written].has_value(); });
            }
            flush_ready();
        }
    }
    for (auto &t : pool) t.join();
    return outcome;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Linear-interpolation quantile of sorted data (position q * (n - 1)).
inline double quantile_sorted(const std::vector<double> &v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty data");
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

struct SummaryRow {
    ProblemKind kind;
    Algorithm algorithm;
    std::size_t count;
    double min, q1, median, q3, max;
};

struct SummaryStats {
    std::vector<SummaryRow> rows;
    /// Cells with no successful records.
    std::vector<std::pair<ProblemKind, Algorithm>> skipped;
};

inline constexpr std::string_view kSummaryHeader = "kind,algorithm,count,min,q1,median,q3,max";

/// Fidelity quartiles per (kind, algorithm), in kind then algorithm order. Failed records are ignored.
inline SummaryStats aggregate(const std::vector<RunRecord> &records) {
    std::map<std::pair<ProblemKind, Algorithm>, std::vector<double>> cells;
    std::set<std::pair<ProblemKind, Algorithm>> seen;
    for (const auto &r : records) {
        seen.emplace(r.kind, r.algorithm);
        if (r.ok() && std::isfinite(r.fidelity)) cells[{r.kind, r.algorithm}].push_back(r.fidelity);
    }
    SummaryStats out;
    for (const auto &key : seen) {
        auto it = cells.find(key);
        if (it == cells.end()) {
            out.skipped.push_back(key);
            continue;
        }
        auto v = it->second;
        std::sort(v.begin(), v.end());
        out.rows.push_back({key.first, key.second, v.size(), v.front(), quantile_sorted(v, 0.25),
                            quantile_sorted(v, 0.5), quantile_sorted(v, 0.75), v.back()});
    }
    return out;
}

inline void write_summary_csv(std::ostream &os, const SummaryStats &s) {
    os << kSummaryHeader << '\n';
    for (const auto &r : s.rows) {
        os << to_string(r.kind) << ',' << to_string(r.algorithm) << ',' << r.count << ',' << format_real(r.min)
           << ',' << format_real(r.q1) << ',' << format_real(r.median) << ',' << format_real(r.q3) << ','
           << format_real(r.max) << '\n';
    }
}

/// Label used in reports; SA on the spin glass only ever runs on the diagonal part.
inline std::string panel_label(ProblemKind k, Algorithm a) {
    std::string s(to_string(a));
    if (a == Algorithm::Sa && k == ProblemKind::SpinGlass) s += " (diagonal part)";
    return s;
}

/// One panel per problem kind, one box per algorithm, fidelity on [0, 1].
inline std::string render_boxplot(const SummaryStats &s) {
    std::vector<ProblemKind> kinds;
    std::map<ProblemKind, std::vector<const SummaryRow *>> by_kind;
    for (const auto &r : s.rows) {
        if (by_kind[r.kind].empty()) kinds.push_back(r.kind);
        by_kind[r.kind].push_back(&r);
    }
    constexpr int kPanelW = 560, kPanelH = 300, kMarginL = 50, kMarginT = 30, kMarginB = 80;
    const int height = static_cast<int>(kinds.size()) * (kPanelH + kMarginT + kMarginB) + 10;
    const int width = kPanelW + kMarginL + 20;
    std::ostringstream os;
    auto num = [](double v) { return format_real(std::round(v * 100.0) / 100.0); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << std::max(height, 40)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    int top = 0;
    for (ProblemKind k : kinds) {
        const auto &rows = by_kind[k];
        const double y0 = top + kMarginT;
        auto ypos = [&](double f) { return y0 + (1.0 - std::clamp(f, 0.0, 1.0)) * kPanelH; };
        os << "<text x=\"" << kMarginL << "\" y=\"" << top + 18 << "\" font-size=\"14\">" << to_string(k)
           << "</text>\n";
        os << "<rect x=\"" << kMarginL << "\" y=\"" << num(y0) << "\" width=\"" << kPanelW << "\" height=\""
           << kPanelH << "\" fill=\"none\" stroke=\"#888\"/>\n";
        for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            os << "<text x=\"" << kMarginL - 6 << "\" y=\"" << num(ypos(tick) + 4)
               << "\" text-anchor=\"end\">" << format_real(tick) << "</text>\n";
        }
        const double slot = static_cast<double>(kPanelW) / static_cast<double>(rows.size());
        for (std::size_t b = 0; b < rows.size(); ++b) {
            const SummaryRow &r = *rows[b];
            const double cx = kMarginL + slot * (static_cast<double>(b) + 0.5);
            const double half = std::min(18.0, slot * 0.3);
            os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(ypos(r.max)) << "\" x2=\"" << num(cx) << "\" y2=\""
               << num(ypos(r.min)) << "\" stroke=\"black\"/>\n";
            os << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(ypos(r.q3)) << "\" width=\"" << num(2 * half)
               << "\" height=\"" << num(std::max(0.0, ypos(r.q1) - ypos(r.q3)))
               << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
            os << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(ypos(r.median)) << "\" x2=\""
               << num(cx + half) << "\" y2=\"" << num(ypos(r.median)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
            os << "<text transform=\"translate(" << num(cx + 4) << ',' << num(y0 + kPanelH + 8)
               << ") rotate(60)\">" << panel_label(r.kind, r.algorithm) << "</text>\n";
        }
        top += kPanelH + kMarginT + kMarginB;
    }
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// QAOA sweep

struct SweepRow {
    std::size_t p;
    RunRecord record;
};

/**
 * QAOA over p x n. Each n uses one suite (seeds base_seed + i) shared by
 * every p, so cells at equal n see the same instances.
 */
inline std::vector<SweepRow> sweep_qaoa(ProblemKind kind, const std::vector<std::size_t> &p_values,
                                        const std::vector<std::size_t> &n_values, std::size_t per_cell,
                                        std::uint64_t base_seed, const BenchConfig &cfg = {},
                                        const GenParams &gen = {}) {
    for (std::size_t n : n_values) {
        if (n < 2 || n > 12) throw std::invalid_argument("sweep sizes must lie in [2, 12]");
    }
    std::vector<SweepRow> out;
    for (std::size_t n : n_values) {
        const auto suite = make_suite(kind, per_cell, n, base_seed, gen);
        std::vector<PauliSum> hams;
        std::vector<GroundTruth> truths;
        for (const auto &inst : suite) {
            hams.push_back(build_hamiltonian(inst));
            truths.push_back(ground_truth(inst));
        }
        for (std::size_t p : p_values) {
            BenchConfig c = cfg;
            c.qaoa_p = p;
            for (std::size_t i = 0; i < suite.size(); ++i) {
                out.push_back({p, run_one(suite[i], hams[i], truths[i], Algorithm::Qaoa, c)});
            }
        }
    }
    return out;
}

inline constexpr std::string_view kSweepTableHeader = "kind,p,n,count,min,q1,median,q3,max";

/// Fidelity quartiles per (p, n) cell.
inline void write_sweep_table(std::ostream &os, ProblemKind kind, const std::vector<SweepRow> &rows) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cells;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (const auto &r : rows) {
        const auto key = std::make_pair(r.p, r.record.n);
        if (!cells.count(key)) order.push_back(key);
        auto &v = cells[key];
        if (r.record.ok()) v.push_back(r.record.fidelity);
    }
    os << kSweepTableHeader << '\n';
    for (const auto &key : order) {
        auto v = cells[key];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        os << to_string(kind) << ',' << key.first << ',' << key.second << ',' << v.size() << ','
           << format_real(v.front()) << ',' << format_real(quantile_sorted(v, 0.25)) << ','
           << format_real(quantile_sorted(v, 0.5)) << ',' << format_real(quantile_sorted(v, 0.75)) << ','
           << format_real(v.back()) << '\n';
    }
}

} // namespace qbench
