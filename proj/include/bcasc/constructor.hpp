#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ann.hpp"
#include "code.hpp"
#include "errors.hpp"
#include "forces.hpp"
#include "packing.hpp"
#include "util.hpp"

namespace bcasc {

enum class NeighborPolicy { Knn, Radius, Full };

inline const char* to_string(NeighborPolicy p) {
    switch (p) {
        case NeighborPolicy::Knn: return "knn";
        case NeighborPolicy::Radius: return "radius";
        case NeighborPolicy::Full: return "full";
    }
    return "?";
}

struct ConstructionConfig {
    NeighborPolicy policy = NeighborPolicy::Knn;
    int knn = 20;                ///< neighbor count for the Knn policy
    double radius = 1.5;         ///< neighborhood radius for the Radius policy
    int n_rot = 16;              ///< phase rotations per codeword
    double alpha0 = 0.9;         ///< initial step size
    int nu0 = 2;                 ///< initial force exponent (even)
    long nu_max = 16384;         ///< stages run while nu < nu_max
    long tau_max = 100000;       ///< inner-iteration cap per stage
    double eps_fixed = 1e-6;     ///< fixed-point tolerance on ||f - c|| after the update
    double eps_df = 1e-4;        ///< force-stability tolerance gating step doubling
    long max_leaf_visits = -1;   ///< search budget; < 0 means exact
    int leaf_capacity = 16;      ///< k-d tree leaf size
    bool verbose_trace = false;  ///< record per-iteration rows in the trace
};

struct StageTrace {
    int nu = 0;
    long iterations = 0;
    double coherence_after = 0.0;
    double wall_seconds = 0.0;
    long radius_fallbacks = 0;
};

struct IterationTrace {
    int nu = 0;
    long tau = 0;
    double max_residual = 0.0;  ///< max_u ||f_u - c_u|| after the update
    int fixed_count = 0;
};

struct ConstructionTrace {
    std::vector<StageTrace> stages;
    std::vector<IterationTrace> iterations;  ///< populated only with verbose_trace
    long total_iterations = 0;
    double wall_seconds = 0.0;
    long radius_fallbacks = 0;
};

struct ConstructionResult {
    SphericalCode code;
    CoherenceReport coherence;
    ConstructionTrace trace;
};

namespace detail {

inline void validate_config(const ConstructionConfig& cfg) {
    if (cfg.n_rot < 1) throw Error("n_rot must be >= 1");
    if (cfg.knn < 1) throw Error("knn must be >= 1");
    if (cfg.radius <= 0.0) throw Error("radius must be positive");
    if (!(cfg.alpha0 > 0.0) || cfg.alpha0 >= 1.0) throw Error("alpha0 must lie in (0,1)");
    if (cfg.nu0 < 2 || cfg.nu0 % 2 != 0) throw Error("nu0 must be a positive even integer");
    if (cfg.nu_max <= cfg.nu0) throw Error("nu_max must exceed nu0");
    if (cfg.tau_max < 1) throw Error("tau_max must be >= 1");
    if (cfg.eps_fixed <= 0.0 || cfg.eps_df <= 0.0) throw Error("tolerances must be positive");
    if (cfg.leaf_capacity < 1) throw Error("leaf_capacity must be >= 1");
}

inline void check_seed_code(const SphericalCode& code) {
    const int n = code.size();
    if (n < 2) throw TooFewCodewordsError();
    for (int u = 0; u < n; ++u) {
        double nrm = norm2(code.column(u));
        if (std::abs(nrm - 1.0) > 1e-9)
            throw DimensionMismatchError("initial codeword " + std::to_string(u) +
                                         " is not unit norm");
    }
    // Coincidence up to the best continuous phase: rotate v onto u and take the
    // distance directly. The identity 2 - 2|<u,v>| cancels catastrophically
    // near zero and would miss truly coincident pairs.
    const int m = code.dim();
    for (int u = 0; u < n; ++u) {
        auto cu = code.column(u);
        for (int v = u + 1; v < n; ++v) {
            auto cv = code.column(v);
            Complex g = inner_product(cu, cv);
            if (std::abs(g) < 0.5) continue;  // nowhere near parallel
            Complex align = std::conj(g) / std::abs(g);
            double d2 = 0.0;
            for (int j = 0; j < m; ++j) d2 += std::norm(cu[j] - cv[j] * align);
            if (d2 < 1e-18)
                throw DegenerateSeedError("codewords " + std::to_string(u) + " and " +
                                          std::to_string(v) +
                                          " coincide up to a phase rotation in the seed code");
        }
    }
}

}  // namespace detail

/// Damped fixed-point iteration with an annealed force exponent.
///
/// Stages run nu = nu0, 2 nu0, ... while nu < nu_max with base step
/// alpha0 for the first stage and alpha0/(nu-1) afterwards. Each inner
/// iteration snapshots the code, rebuilds the rotation set (and, unless the
/// policy is Full, a search index over it), gathers every codeword's neighbor
/// list from that snapshot, and then updates codewords in index order:
///   c_u <- normalize(c_u + alpha_u f_u),
/// doubling alpha_u while the force direction is stable
/// (||f_u - f_u_prev|| < eps_df and 2 alpha_u < 1) and resetting it to the
/// stage base otherwise. A codeword is fixed once ||f_u - c_u|| < eps_fixed
/// with the post-update c_u; flags are sticky within a stage and a stage ends
/// when all are fixed or after tau_max iterations.
///
/// With the Radius policy, an empty neighborhood falls back to the single
/// nearest neighbor for that codeword and iteration (counted in the trace).
inline ConstructionResult construct(const SphericalCode& initial, const ConstructionConfig& cfg) {
    detail::validate_config(cfg);
    detail::check_seed_code(initial);

    const int m = initial.dim();
    const int n = initial.size();
    const int dim = 2 * m;
    const auto t0 = std::chrono::steady_clock::now();

    SphericalCode code = initial;
    ConstructionTrace trace;

    std::vector<double> queries(static_cast<std::size_t>(n) * dim);
    std::vector<double> prev(static_cast<std::size_t>(n) * dim);  // packed previous directions
    std::vector<double> dir(dim), upd(dim);
    std::vector<NeighborList> lists(n);
    std::vector<char> has_prev(n, 0), fixed(n, 0);
    std::vector<double> alpha(n, cfg.alpha0);
    std::vector<detail::ForceEntry> entries;
    RotationSet set;
    std::unique_ptr<NnIndex> index;

    double stage_alpha = cfg.alpha0;
    for (long nu = cfg.nu0; nu < cfg.nu_max; nu *= 2) {
        const auto stage_t0 = std::chrono::steady_clock::now();
        std::fill(fixed.begin(), fixed.end(), 0);
        std::fill(has_prev.begin(), has_prev.end(), 0);
        std::fill(alpha.begin(), alpha.end(), stage_alpha);
        long tau = 0;
        long stage_fallbacks = 0;
        bool all_fixed = false;
        while (tau < cfg.tau_max && !all_fixed) {
            set.rebuild(code, cfg.n_rot);
            for (int u = 0; u < n; ++u)
                pack_complex(code.column(u), {queries.data() + static_cast<std::size_t>(u) * dim,
                                              static_cast<std::size_t>(dim)});
            if (cfg.policy != NeighborPolicy::Full) {
                // A tree only pays off for many points of moderate dimension;
                // the linear scan is exact with identical tie-breaking, so the
                // choice never changes results. An explicit search budget
                // forces the tree (budgets are defined on leaf visits).
                const bool use_tree =
                    cfg.max_leaf_visits >= 0 || (set.size() > 512 && dim <= 64);
                if (use_tree) {
                    if (!index)
                        index = std::make_unique<NnIndex>(set, cfg.leaf_capacity);
                    else
                        index->rebuild(set, cfg.leaf_capacity);
                }
                for (int u = 0; u < n; ++u) {
                    const double* q = queries.data() + static_cast<std::size_t>(u) * dim;
                    if (cfg.policy == NeighborPolicy::Knn) {
                        if (use_tree)
                            index->knn_search_into(q, cfg.knn, u, cfg.max_leaf_visits, lists[u]);
                        else
                            brute_knn_search(set, q, cfg.knn, u, lists[u]);
                    } else {
                        if (use_tree)
                            index->radius_search_into(q, cfg.radius, u, lists[u]);
                        else
                            brute_radius_search(set, q, cfg.radius, u, lists[u]);
                        if (lists[u].empty()) {
                            if (use_tree)
                                index->knn_search_into(q, 1, u, cfg.max_leaf_visits, lists[u]);
                            else
                                brute_knn_search(set, q, 1, u, lists[u]);
                            ++stage_fallbacks;
                        }
                    }
                }
            }

            double max_residual = 0.0;
            for (int u = 0; u < n; ++u) {
                const double* q = queries.data() + static_cast<std::size_t>(u) * dim;
                entries.clear();
                if (cfg.policy == NeighborPolicy::Full) {
                    for (int i = 0; i < set.size(); ++i) {
                        if (set.owner(i) == u) continue;
                        entries.push_back({set.point(i), sqdist(q, set.point(i), dim), i});
                    }
                } else {
                    for (const auto& nb : lists[u])
                        entries.push_back({set.point(nb.index), nb.d2, nb.index});
                }
                detail::force_core_packed(q, dim, entries.data(), entries.size(),
                                          static_cast<int>(nu), dir.data());

                double* pu = prev.data() + static_cast<std::size_t>(u) * dim;
                bool stable = has_prev[u] && std::sqrt(sqdist(dir.data(), pu, dim)) < cfg.eps_df;
                if (stable && 2.0 * alpha[u] < 1.0)
                    alpha[u] *= 2.0;
                else
                    alpha[u] = stage_alpha;

                for (int j = 0; j < dim; ++j) upd[j] = q[j] + alpha[u] * dir[j];
                double s = 0.0;
                for (int j = 0; j < dim; ++j) s += upd[j] * upd[j];
                double nrm = std::sqrt(s);
                if (nrm < 1e-300) throw ZeroVectorError();
                for (int j = 0; j < dim; ++j) upd[j] /= nrm;

                double residual = std::sqrt(sqdist(dir.data(), upd.data(), dim));
                if (residual < cfg.eps_fixed) fixed[u] = 1;
                max_residual = std::max(max_residual, residual);

                auto col = code.column(u);
                for (int w = 0; w < m; ++w) col[w] = Complex(upd[w], upd[m + w]);
                std::copy(dir.begin(), dir.end(), pu);
                has_prev[u] = 1;
            }
            ++tau;
            all_fixed = true;
            for (int u = 0; u < n; ++u)
                if (!fixed[u]) {
                    all_fixed = false;
                    break;
                }
            if (cfg.verbose_trace) {
                int fc = 0;
                for (int u = 0; u < n; ++u) fc += fixed[u];
                trace.iterations.push_back({static_cast<int>(nu), tau, max_residual, fc});
            }
        }
        const double stage_wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - stage_t0).count();
        trace.stages.push_back(
            {static_cast<int>(nu), tau, coherence(code).mu, stage_wall, stage_fallbacks});
        trace.total_iterations += tau;
        trace.radius_fallbacks += stage_fallbacks;
        stage_alpha = cfg.alpha0 / (static_cast<double>(2 * nu) - 1.0);
    }

    ConstructionResult res;
    res.code = std::move(code);
    res.coherence = coherence(res.code);
    res.trace = std::move(trace);
    res.trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

/// Exhaustive-summation reference: identical schedule and update rule with the
/// force taken over every rotation of every other codeword.
inline ConstructionResult construct_reference(const SphericalCode& initial,
                                              ConstructionConfig cfg) {
    cfg.policy = NeighborPolicy::Full;
    return construct(initial, cfg);
}

struct RunSummary {
    std::uint64_t seed = 0;
    double coherence = 0.0;
    long iterations = 0;
    double wall_seconds = 0.0;
    long radius_fallbacks = 0;
    bool failed = false;
    std::string error;
};

struct BestOfRuns {
    SphericalCode code;
    CoherenceReport coherence;
    int best_index = -1;
    std::vector<RunSummary> runs;
    ConstructionTrace best_trace;
};

/// Independent restarts from random seed codes; keeps the run with the lowest
/// coherence (ties resolved toward the lowest seed value).
inline BestOfRuns best_of_runs(int m, int n, const ConstructionConfig& cfg,
                               const std::vector<std::uint64_t>& seeds, int threads = 1) {
    if (seeds.empty()) throw Error("best_of_runs requires at least one seed");
    std::vector<ConstructionResult> results(seeds.size());
    std::vector<std::string> errors(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        try {
            results[i] = construct(random_spherical_code(m, n, seeds[i]), cfg);
        } catch (const std::exception& e) {
            errors[i] = e.what()[0] ? e.what() : "construction failed";
        }
    });
    BestOfRuns best;
    best.runs.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (!errors[i].empty()) {
            RunSummary bad;
            bad.seed = seeds[i];
            bad.failed = true;
            bad.error = errors[i];
            best.runs.push_back(std::move(bad));
            continue;
        }
        const auto& r = results[i];
        best.runs.push_back({seeds[i], r.coherence.mu, r.trace.total_iterations,
                             r.trace.wall_seconds, r.trace.radius_fallbacks, false, {}});
        bool better = best.best_index < 0 || r.coherence.mu < best.coherence.mu ||
                      (r.coherence.mu == best.coherence.mu &&
                       seeds[i] < seeds[static_cast<std::size_t>(best.best_index)]);
        if (better) {
            best.best_index = static_cast<int>(i);
            best.coherence = r.coherence;
        }
    }
    if (best.best_index < 0)
        throw Error("all construction runs failed: " + errors.front());
    auto& chosen = results[static_cast<std::size_t>(best.best_index)];
    best.code = std::move(chosen.code);
    best.best_trace = std::move(chosen.trace);
    return best;
}

}  // namespace bcasc
