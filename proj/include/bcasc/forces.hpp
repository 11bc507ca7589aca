#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ann.hpp"
#include "code.hpp"
#include "errors.hpp"
#include "packing.hpp"

namespace bcasc {

/// Unit-norm resultant force plus the natural log of the magnitude the
/// unnormalized sum would have had (recoverable even when the raw sum would
/// overflow or underflow a double).
struct Force {
    CVec direction;
    double raw_scale_log = 0.0;
};

namespace detail {

struct ForceEntry {
    const double* p;  ///< packed neighbor coordinates (length 2m)
    double d2;        ///< squared distance to the query
    int index;        ///< rotation-set point index; defines summation order
};

/// Shared force core. Entries are summed in ascending point-index order
/// (codeword-major, rotation-minor) regardless of how they were gathered, so
/// exhaustive and neighbor-restricted callers produce bitwise-equal results
/// on equal entry sets. Terms are rescaled by the dominant one:
///   w_k = (d2_min / d2_k)^(nu/2),  term_k = w_k (q - p_k),
/// with negligible weights (< 1e-300) dropped. The unit direction is written
/// into `acc` (caller scratch of length dim); returns the log-magnitude the
/// unrescaled sum would have had.
inline double force_core_packed(const double* q, int dim, ForceEntry* es, std::size_t count,
                                int nu, double* acc) {
    if (count == 0) throw EmptyNeighborhoodError();
    if (nu < 2 || nu % 2 != 0)
        throw Error("force exponent nu must be a positive even integer, got " + std::to_string(nu));
    std::sort(es, es + count,
              [](const ForceEntry& a, const ForceEntry& b) { return a.index < b.index; });
    double d2min = es[0].d2;
    for (std::size_t i = 1; i < count; ++i) d2min = std::min(d2min, es[i].d2);
    if (d2min < 1e-24)
        throw CoincidentRotationError("rotation at squared distance " + std::to_string(d2min) +
                                      " coincides with the query");
    const double half_nu = 0.5 * static_cast<double>(nu);
    for (int j = 0; j < dim; ++j) acc[j] = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double t = d2min / es[i].d2;
        double w = (t == 1.0) ? 1.0 : std::exp(half_nu * std::log(t));
        if (w < 1e-300) continue;
        const double* p = es[i].p;
        for (int j = 0; j < dim; ++j) acc[j] += w * (q[j] - p[j]);
    }
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += acc[j] * acc[j];
    double nrm = std::sqrt(s);
    if (nrm < 1e-300) throw DegenerateForceError();
    for (int j = 0; j < dim; ++j) acc[j] /= nrm;
    return std::log(nrm) - half_nu * std::log(d2min);
}

inline Force force_core(const double* q, int dim, std::vector<ForceEntry>& entries, int nu) {
    std::vector<double> acc(dim);
    Force f;
    f.raw_scale_log = force_core_packed(q, dim, entries.data(), entries.size(), nu, acc.data());
    f.direction = unpack_complex(acc);
    return f;
}

}  // namespace detail

/// Force on codeword u from every rotation of every other codeword:
///   f_u = sum_{v != u} sum_k (c_u - c_v e^{i phi_k}) / ||c_u - c_v e^{i phi_k}||^nu,
/// returned as a unit direction plus log-magnitude.
inline Force force_full(const SphericalCode& code, int u, int nu, int n_rot) {
    const int m = code.dim();
    const int n = code.size();
    if (u < 0 || u >= n) throw DimensionMismatchError("codeword index out of range");
    if (n < 2) throw TooFewCodewordsError();
    RotationSet set(code, n_rot);
    std::vector<double> q = pack_complex(code.column(u));
    std::vector<detail::ForceEntry> entries;
    entries.reserve(static_cast<std::size_t>(n - 1) * n_rot);
    for (int i = 0; i < set.size(); ++i) {
        if (set.owner(i) == u) continue;
        entries.push_back({set.point(i), sqdist(q.data(), set.point(i), 2 * m), i});
    }
    return detail::force_core(q.data(), 2 * m, entries, nu);
}

/// Same force restricted to an explicit neighbor list (typically the output of
/// an index query with the owner excluded). Query is the packed codeword the
/// list was built for.
inline Force force_ann(const RotationSet& set, std::span<const double> query,
                       const NeighborList& neighbors, int nu) {
    if (static_cast<int>(query.size()) != set.dim())
        throw DimensionMismatchError("query length does not match packed dimension");
    std::vector<detail::ForceEntry> entries;
    entries.reserve(neighbors.size());
    for (const auto& nb : neighbors) entries.push_back({set.point(nb.index), nb.d2, nb.index});
    return detail::force_core(query.data(), set.dim(), entries, nu);
}

}  // namespace bcasc
