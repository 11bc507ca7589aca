#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace bcasc {

enum class Field { Real, Complex };

enum class BoundRegime { Welch, Orthoplex, Levenshtein, Mukkavilli, CompositeMax };

inline const char* to_string(BoundRegime r) {
    switch (r) {
        case BoundRegime::Welch: return "welch";
        case BoundRegime::Orthoplex: return "orthoplex";
        case BoundRegime::Levenshtein: return "levenshtein";
        case BoundRegime::Mukkavilli: return "mukkavilli";
        case BoundRegime::CompositeMax: return "composite-max";
    }
    return "?";
}

/// sqrt((n-m)/(m(n-1))); 0 when n <= m (an orthobasis or smaller achieves mu = 0).
inline double welch_bound(int m, int n) {
    if (m < 1 || n < 1) throw DimensionMismatchError("welch_bound requires positive dimensions");
    if (n <= m) return 0.0;
    return std::sqrt(static_cast<double>(n - m) / (static_cast<double>(m) * (n - 1)));
}

/// Whether the Welch bound is attainable in principle (ETF existence ceiling).
inline bool welch_applicable(int m, int n, Field field) {
    if (field == Field::Real) return n <= m * (m + 1) / 2;
    return n <= m * m;
}

inline double orthoplex_bound(int m) {
    if (m < 1) throw DimensionMismatchError("orthoplex_bound requires m >= 1");
    return 1.0 / std::sqrt(static_cast<double>(m));
}

/// Levenshtein bound; radicand clamped to 0 when the bound is vacuous.
inline double levenshtein_bound(int m, int n, Field field) {
    if (m < 1 || n < 1) throw DimensionMismatchError("levenshtein_bound requires positive dimensions");
    if (n <= m) return 0.0;
    const double md = m, nd = n;
    double rad;
    if (field == Field::Complex)
        rad = (2.0 * nd - md * md - md) / ((md + 1.0) * (nd - md));
    else
        rad = (3.0 * nd - md * md - 2.0 * md) / ((md + 2.0) * (nd - md));
    return rad > 0.0 ? std::sqrt(rad) : 0.0;
}

/// 1 - 2 n^(-1/(m-1)), clamped to 0 when vacuous. Requires m >= 2.
inline double mukkavilli_bound(int m, int n) {
    if (m < 2) throw DimensionMismatchError("mukkavilli_bound requires m >= 2");
    if (n < 1) throw DimensionMismatchError("mukkavilli_bound requires n >= 1");
    double v = 1.0 - 2.0 * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(m) - 1.0));
    return std::max(0.0, v);
}

struct BoundReport {
    int m = 0, n = 0;
    double value = 0.0;
    BoundRegime regime = BoundRegime::Welch;
};

/// Piecewise lower bound on the coherence of any complex code of n unit
/// vectors in C^m:
///   n <= m          -> 0
///   m < n <= m^2    -> Welch
///   m^2 < n <= 2(m^2-1) -> max(orthoplex, Levenshtein, Mukkavilli)
///   n > 2(m^2-1)    -> max(Levenshtein, Mukkavilli)
/// regime names the unique maximizer; ties report CompositeMax.
inline BoundReport composite_bound_complex(int m, int n) {
    if (m < 1 || n < 1) throw DimensionMismatchError("composite bound requires positive dimensions");
    BoundReport rep;
    rep.m = m;
    rep.n = n;
    if (n <= m) {
        rep.value = 0.0;
        rep.regime = BoundRegime::Welch;
        return rep;
    }
    const long long m2 = static_cast<long long>(m) * m;
    if (n <= m2) {
        rep.value = welch_bound(m, n);
        rep.regime = BoundRegime::Welch;
        return rep;
    }
    double lev = levenshtein_bound(m, n, Field::Complex);
    double muk = (m >= 2) ? mukkavilli_bound(m, n) : 0.0;
    double ort = (n <= 2 * (m2 - 1)) ? orthoplex_bound(m) : 0.0;
    bool middle = n <= 2 * (m2 - 1);

    double best = std::max({lev, muk, ort});
    rep.value = best;
    int hits = 0;
    BoundRegime which = BoundRegime::CompositeMax;
    const double tie_eps = 1e-12;
    if (middle && std::abs(ort - best) <= tie_eps) { ++hits; which = BoundRegime::Orthoplex; }
    if (std::abs(lev - best) <= tie_eps) { ++hits; which = BoundRegime::Levenshtein; }
    if (std::abs(muk - best) <= tie_eps) { ++hits; which = BoundRegime::Mukkavilli; }
    rep.regime = (hits == 1) ? which : BoundRegime::CompositeMax;
    return rep;
}

/// delta_k = (k-1) mu, valid for sparsity orders k < 1/mu. k = 1 always valid.
inline double rip_constant_from_coherence(int k, double mu) {
    if (k < 1) throw OrderTooLargeError("sparsity order must be >= 1");
    if (mu < 0.0 || mu > 1.0) throw DimensionMismatchError("coherence must lie in [0,1]");
    if (k > 1 && static_cast<double>(k) >= 1.0 / mu)
        throw OrderTooLargeError("coherence-based RIP constant requires k < 1/mu (k=" +
                                 std::to_string(k) + ")");
    return (static_cast<double>(k) - 1.0) * mu;
}

}  // namespace bcasc
