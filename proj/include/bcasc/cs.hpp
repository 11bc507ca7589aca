#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "code.hpp"
#include "ensembles.hpp"
#include "errors.hpp"
#include "util.hpp"

namespace bcasc {

struct SparseSignal {
    CVec x;                    ///< length n, unit norm unless s = 0
    std::vector<int> support;  ///< sorted nonzero positions, |support| = s
};

/// s-sparse unit-norm signal: support drawn by a Fisher-Yates prefix, values
/// i.i.d. complex Gaussian, then normalized. s = 0 gives the zero signal.
inline SparseSignal sparse_signal(int n, int s, std::uint64_t seed) {
    if (n < 1) throw DimensionMismatchError("sparse_signal requires n >= 1");
    if (s < 0 || s > n) throw DimensionMismatchError("sparsity must lie in [0, n]");
    SparseSignal sig;
    sig.x.assign(n, Complex{0.0, 0.0});
    if (s == 0) return sig;
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    std::mt19937_64 gen(seed);
    for (int i = 0; i < s; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(pos[i], pos[pick(gen)]);
    }
    pos.resize(s);
    std::sort(pos.begin(), pos.end());
    sig.support = pos;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i : sig.support) {
        double re = nd(gen);
        double im = nd(gen);
        sig.x[i] = Complex(re, im);
    }
    normalize_in_place(sig.x);
    return sig;
}

/// y = A x
inline CVec measure(const SphericalCode& A, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != A.size())
        throw DimensionMismatchError("signal length does not match matrix columns");
    CVec y(A.dim(), Complex{0.0, 0.0});
    for (int u = 0; u < A.size(); ++u) {
        auto col = A.column(u);
        Complex xu = x[u];
        for (int w = 0; w < A.dim(); ++w) y[w] += col[w] * xu;
    }
    return y;
}

/// ||xhat - x|| / ||x||; when x = 0 returns ||xhat||.
inline double recovery_error(std::span<const Complex> xhat, std::span<const Complex> x) {
    if (xhat.size() != x.size()) throw DimensionMismatchError("recovery_error length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += std::norm(xhat[i] - x[i]);
        den += std::norm(x[i]);
    }
    num = std::sqrt(num);
    den = std::sqrt(den);
    return den > 0.0 ? num / den : num;
}

struct L1Params {
    double stop_tol = 1e-10;
    long max_iters = 20000;
};

struct RecoverySolution {
    CVec x;
    bool converged = false;
    long iterations = 0;
    double residual = 0.0;  ///< ||A x - y|| of the returned iterate
};

namespace detail {

inline CVec adjoint_apply(const SphericalCode& A, std::span<const Complex> z) {
    CVec out(A.size());
    for (int u = 0; u < A.size(); ++u) {
        auto col = A.column(u);
        Complex s{0.0, 0.0};
        for (int w = 0; w < A.dim(); ++w) s += std::conj(col[w]) * z[w];
        out[u] = s;
    }
    return out;
}

/// Largest singular value of A via power iteration on A^H A.
inline double operator_norm(const SphericalCode& A) {
    std::mt19937_64 gen(0xB0F1E577C0FFEEull);
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec v(A.size());
    for (auto& z : v) z = Complex(nd(gen), nd(gen));
    normalize_in_place(v);
    double lambda = 0.0;
    for (int it = 0; it < 100; ++it) {
        CVec w = measure(A, v);
        CVec v2 = adjoint_apply(A, w);
        double nrm = norm2(v2);
        if (nrm < 1e-300) return 0.0;
        for (auto& z : v2) z /= nrm;
        v.swap(v2);
        if (it > 0 && std::abs(nrm - lambda) <= 1e-8 * std::max(1.0, nrm)) {
            lambda = nrm;
            break;
        }
        lambda = nrm;
    }
    return std::sqrt(lambda);
}

}  // namespace detail

/// Basis pursuit (min ||x||_1 s.t. Ax = y) by the Chambolle-Pock primal-dual
/// iteration with tau = sigma = 0.99/||A||:
///   zeta <- zeta + sigma (A xbar - y)
///   x    <- shrink(x - tau A^H zeta, tau)   (complex magnitude soft threshold)
///   xbar <- 2 x_new - x_old
/// Stops when ||Ax - y|| < stop_tol and the relative primal change is below
/// stop_tol, or at max_iters; in the latter case the lowest-residual iterate
/// seen is returned with converged = false.
inline RecoverySolution recover_l1(const SphericalCode& A, std::span<const Complex> y,
                                   const L1Params& params = {}) {
    if (static_cast<int>(y.size()) != A.dim())
        throw DimensionMismatchError("measurement length does not match matrix rows");
    const int n = A.size();
    const int m = A.dim();
    double L = detail::operator_norm(A);
    if (L < 1e-300) throw Error("operator norm vanished; matrix is zero");
    const double tau = 0.99 / L;
    const double sigma = 0.99 / L;

    CVec x(n, Complex{0.0, 0.0});
    CVec zeta(m, Complex{0.0, 0.0});
    CVec ax(m, Complex{0.0, 0.0});
    CVec ax_prev(m, Complex{0.0, 0.0});
    CVec best_x = x;
    double best_res = norm2(y);
    long best_it = 0;

    RecoverySolution sol;
    for (long it = 1; it <= params.max_iters; ++it) {
        for (int w = 0; w < m; ++w) zeta[w] += sigma * (2.0 * ax[w] - ax_prev[w] - y[w]);
        CVec g = detail::adjoint_apply(A, zeta);
        double change2 = 0.0;
        CVec x_new(n);
        for (int u = 0; u < n; ++u) {
            Complex t = x[u] - tau * g[u];
            double mag = std::abs(t);
            x_new[u] = (mag > tau) ? t * ((mag - tau) / mag) : Complex{0.0, 0.0};
            change2 += std::norm(x_new[u] - x[u]);
        }
        ax_prev.swap(ax);
        ax = measure(A, x_new);
        double res2 = 0.0;
        for (int w = 0; w < m; ++w) res2 += std::norm(ax[w] - y[w]);
        double residual = std::sqrt(res2);
        double xnrm = norm2(x_new);
        double rel_change = std::sqrt(change2) / std::max(xnrm, 1e-30);
        x.swap(x_new);
        if (residual < best_res) {
            best_res = residual;
            best_x = x;
            best_it = it;
        }
        if (residual < params.stop_tol && rel_change < params.stop_tol) {
            sol.x = x;
            sol.converged = true;
            sol.iterations = it;
            sol.residual = residual;
            return sol;
        }
    }
    sol.x = std::move(best_x);
    sol.converged = false;
    sol.iterations = params.max_iters;
    sol.residual = best_res;
    (void)best_it;
    return sol;
}

struct PhaseCell {
    int delta_index = 0, rho_index = 0;  ///< 1-based grid coordinates
    double delta = 0.0, rho = 0.0;
    int m = 0, s = 0;
    double error = 0.0;
    bool converged = false;
    long iterations = 0;
    bool failed = false;
};

struct PhaseDiagram {
    int n = 0;
    int grid_steps = 0;
    MatrixKind kind = MatrixKind::Gaussian;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> matrix_seeds;  ///< one per delta column
    std::vector<PhaseCell> cells;             ///< delta-major order
};

/// Donoho-Tanner style recovery sweep over the (delta, rho) grid
/// {1/G, ..., 1}^2 with m = round(delta n) and s = round(rho m). One matrix is
/// drawn per delta column; each cell gets a fresh signal from a sub-seed.
inline PhaseDiagram phase_diagram(int n, MatrixKind kind, int grid_steps, std::uint64_t seed,
                                  const ConstructionConfig& cfg = {}, const L1Params& lp = {},
                                  int threads = 1) {
    if (n < 2) throw DimensionMismatchError("phase_diagram requires n >= 2");
    if (grid_steps < 1) throw DimensionMismatchError("phase_diagram requires grid_steps >= 1");
    PhaseDiagram d;
    d.n = n;
    d.grid_steps = grid_steps;
    d.kind = kind;
    d.seed = seed;
    d.cells.resize(static_cast<std::size_t>(grid_steps) * grid_steps);
    for (int di = 1; di <= grid_steps; ++di) {
        double delta = static_cast<double>(di) / grid_steps;
        int m = std::max(1, static_cast<int>(std::lround(delta * n)));
        std::uint64_t mseed = mix_seed(seed, static_cast<std::uint64_t>(di), 0);
        d.matrix_seeds.push_back(mseed);
        SphericalCode A;
        bool column_failed = false;
        try {
            A = make_matrix(kind, m, n, mseed, cfg);
        } catch (const std::exception&) {
            column_failed = true;
        }
        parallel_for(static_cast<std::size_t>(grid_steps), threads, [&](std::size_t r) {
            int ri = static_cast<int>(r) + 1;
            double rho = static_cast<double>(ri) / grid_steps;
            PhaseCell& cell = d.cells[static_cast<std::size_t>(di - 1) * grid_steps + (ri - 1)];
            cell.delta_index = di;
            cell.rho_index = ri;
            cell.delta = delta;
            cell.rho = rho;
            cell.m = m;
            cell.s = std::clamp(static_cast<int>(std::lround(rho * m)), 0, m);
            if (column_failed) {
                cell.failed = true;
                cell.error = std::numeric_limits<double>::quiet_NaN();
                return;
            }
            try {
                std::uint64_t cseed =
                    mix_seed(seed, static_cast<std::uint64_t>(di), static_cast<std::uint64_t>(ri));
                SparseSignal sig = sparse_signal(n, cell.s, cseed);
                CVec y = measure(A, sig.x);
                RecoverySolution sol = recover_l1(A, y, lp);
                cell.error = recovery_error(sol.x, sig.x);
                cell.converged = sol.converged;
                cell.iterations = sol.iterations;
            } catch (const std::exception&) {
                cell.failed = true;
                cell.error = std::numeric_limits<double>::quiet_NaN();
            }
        });
    }
    return d;
}

/// Cells recovered to better than `threshold` relative error.
inline int exact_recovery_count(const PhaseDiagram& d, double threshold = 1e-6) {
    int c = 0;
    for (const auto& cell : d.cells)
        if (!cell.failed && cell.error < threshold) ++c;
    return c;
}

struct ErrorStatistics {
    std::vector<double> bin_left;        ///< histogram bin left edges, width 0.5
    std::vector<long> counts;            ///< per-bin cell counts
    std::vector<double> survivor_edges;  ///< bin edges plus one leading edge
    std::vector<double> survivor;        ///< fraction of values strictly above each edge
};

/// Distribution of xi = -log10(max(error, 1e-16)) over non-failed cells:
/// a width-0.5 histogram and the survivor function evaluated at its edges
/// (prepended with one extra edge so the survivor starts at 1; it ends at 0).
inline ErrorStatistics error_statistics(const std::vector<PhaseCell>& cells) {
    std::vector<double> xs;
    for (const auto& c : cells)
        if (!c.failed) xs.push_back(-std::log10(std::max(c.error, 1e-16)));
    if (xs.empty()) throw Error("error_statistics requires at least one non-failed cell");
    double lo = std::floor(*std::min_element(xs.begin(), xs.end()) / 0.5) * 0.5;
    double hi = *std::max_element(xs.begin(), xs.end());
    int nbins = static_cast<int>(std::floor((hi - lo) / 0.5)) + 1;
    ErrorStatistics st;
    st.bin_left.resize(nbins);
    st.counts.assign(nbins, 0);
    for (int b = 0; b < nbins; ++b) st.bin_left[b] = lo + 0.5 * b;
    for (double v : xs) {
        int b = std::clamp(static_cast<int>(std::floor((v - lo) / 0.5)), 0, nbins - 1);
        ++st.counts[b];
    }
    st.survivor_edges.resize(nbins + 2);
    st.survivor_edges[0] = lo - 0.5;
    for (int b = 0; b <= nbins; ++b) st.survivor_edges[b + 1] = lo + 0.5 * b;
    for (double edge : st.survivor_edges) {
        long above = 0;
        for (double v : xs)
            if (v > edge) ++above;
        st.survivor.push_back(static_cast<double>(above) / static_cast<double>(xs.size()));
    }
    return st;
}

inline ErrorStatistics error_statistics(const PhaseDiagram& d) { return error_statistics(d.cells); }

}  // namespace bcasc
