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
 * Derivative-free minimizers: SPSA and Nelder-Mead. Both report best-so-far
 * results and count every objective evaluation against the budget.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbench/statevector.hpp"

namespace qbench {

using Objective = std::function<double(std::span<const double>)>;

struct OptResult {
    std::vector<double> best_theta;
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    /// (evaluation index, value) for every objective call.
    std::vector<std::pair<std::size_t, double>> history;
};

namespace detail {

// Wraps the objective with evaluation counting, best-so-far tracking and a budget.
class Tracker {
  public:
    Tracker(const Objective &f, std::size_t budget) : f_(f), budget_(budget) {}

    [[nodiscard]] bool exhausted() const { return result_.evaluations >= budget_; }
    [[nodiscard]] std::size_t remaining() const { return budget_ - result_.evaluations; }

    double operator()(std::span<const double> x) {
        if (exhausted()) throw std::logic_error("objective budget exhausted");
        const double v = f_(x);
        if (!std::isfinite(v)) {
            throw std::runtime_error("objective returned a non-finite value at evaluation " +
                                     std::to_string(result_.evaluations));
        }
        result_.history.emplace_back(result_.evaluations, v);
        ++result_.evaluations;
        if (v < result_.best_value) {
            result_.best_value = v;
            result_.best_theta.assign(x.begin(), x.end());
        }
        return v;
    }

    OptResult &result() { return result_; }

  private:
    const Objective &f_;
    std::size_t budget_;
    OptResult result_;
};

} // namespace detail

struct SpsaOptions {
    std::size_t max_iterations = 5000;
    /// Hard cap on objective calls; 0 means 2 + 2 * max_iterations.
    std::size_t max_evaluations = 0;
    double a = 0.1;
    double c = 0.1;
    /// Stability constant; negative selects max_iterations / 10.
    double stability = -1.0;
    double alpha = 0.602;
    double gamma = 0.101;
};

/**
 * Simultaneous-perturbation stochastic approximation with gains
 * a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma and Rademacher
 * perturbations. Evaluates theta0 once, two points per iteration, and the
 * final iterate once.
 */
inline OptResult spsa_minimize(const Objective &f, std::vector<double> theta0,
                               const SpsaOptions &opts, Rng &rng) {
    if (opts.max_iterations < 1) throw std::invalid_argument("spsa: max_iterations must be >= 1");
    const std::size_t budget =
        opts.max_evaluations > 0 ? opts.max_evaluations : 2 + 2 * opts.max_iterations;
    const double A = opts.stability >= 0.0 ? opts.stability
                                           : static_cast<double>(opts.max_iterations) / 10.0;
    detail::Tracker track(f, budget);
    std::vector<double> theta = std::move(theta0);
    track(theta);

    const std::size_t dim = theta.size();
    std::bernoulli_distribution coin(0.5);
    std::vector<double> delta(dim), plus(dim), minus(dim);
    std::size_t k = 0;
    for (; k < opts.max_iterations && track.remaining() >= 3; ++k) {
        const double ak = opts.a / std::pow(static_cast<double>(k) + 1.0 + A, opts.alpha);
        const double ck = opts.c / std::pow(static_cast<double>(k) + 1.0, opts.gamma);
        for (std::size_t i = 0; i < dim; ++i) {
            delta[i] = coin(rng) ? 1.0 : -1.0;
            plus[i] = theta[i] + ck * delta[i];
            minus[i] = theta[i] - ck * delta[i];
        }
        const double fp = track(plus);
        const double fm = track(minus);
        const double slope = (fp - fm) / (2.0 * ck);
        for (std::size_t i = 0; i < dim; ++i) theta[i] -= ak * slope / delta[i];
    }
    if (k > 0 && !track.exhausted()) track(theta);
    track.result().iterations = k;
    return std::move(track.result());
}

struct SimplexOptions {
    std::size_t max_evaluations = 5000;
    double initial_step = 0.1;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

/**
 * Nelder-Mead downhill simplex. Runs until the evaluation budget is spent;
 * there is no convergence-based early exit.
 */
inline OptResult simplex_minimize(const Objective &f, std::vector<double> theta0,
                                  const SimplexOptions &opts = {}) {
    if (opts.max_evaluations < 1) throw std::invalid_argument("simplex: budget must be >= 1");
    detail::Tracker track(f, opts.max_evaluations);
    const std::size_t n = theta0.size();

    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    simplex.push_back({theta0, track(theta0)});
    for (std::size_t i = 0; i < n && !track.exhausted(); ++i) {
        std::vector<double> x = theta0;
        x[i] += opts.initial_step;
        const double fx = track(x);
        simplex.push_back({std::move(x), fx});
    }
    if (simplex.size() < n + 1) {
        track.result().iterations = 0;
        return std::move(track.result());
    }

    auto along = [n](const std::vector<double> &from, const std::vector<double> &to, double t) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = from[i] + t * (to[i] - from[i]);
        return out;
    };

    std::size_t iterations = 0;
    std::vector<double> centroid(n);
    while (!track.exhausted() && n > 0) {
        ++iterations;
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex &a, const Vertex &b) { return a.fx < b.fx; });
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
        }
        for (auto &c : centroid) c /= static_cast<double>(n);
        Vertex &worst = simplex[n];

        // x_r = c + rho (c - x_worst)
        std::vector<double> xr = along(centroid, worst.x, -opts.reflection);
        const double fr = track(xr);
        if (fr < simplex[0].fx) {
            if (track.exhausted()) {
                worst = {std::move(xr), fr};
                break;
            }
            std::vector<double> xe = along(centroid, worst.x, -opts.reflection * opts.expansion);
            const double fe = track(xe);
            worst = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
            continue;
        }
        if (fr < simplex[n - 1].fx) {
            worst = {std::move(xr), fr};
            continue;
        }
        if (track.exhausted()) break;
        const bool outside = fr < worst.fx;
        std::vector<double> xc = outside ? along(centroid, xr, opts.contraction)
                                         : along(centroid, worst.x, opts.contraction);
        const double fc = track(xc);
        if ((outside && fc <= fr) || (!outside && fc < worst.fx)) {
            worst = {std::move(xc), fc};
            continue;
        }
        for (std::size_t v = 1; v <= n && !track.exhausted(); ++v) {
            simplex[v].x = along(simplex[0].x, simplex[v].x, opts.shrink);
            simplex[v].fx = track(simplex[v].x);
        }
    }
    track.result().iterations = iterations;
    return std::move(track.result());
}

} // namespace qbench
