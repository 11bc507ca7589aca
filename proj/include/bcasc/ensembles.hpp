#pragma once

#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "code.hpp"
#include "constructor.hpp"
#include "errors.hpp"

namespace bcasc {

/// i.i.d. complex Gaussian entries with unit-normalized columns.
inline SphericalCode gaussian_matrix(int m, int n, std::uint64_t seed) {
    return random_spherical_code(m, n, seed);
}

/// m distinct rows of the n x n DFT, scaled by 1/sqrt(m). Rows are drawn by a
/// seeded Fisher-Yates prefix and sorted; phases are reduced with integer
/// arithmetic so entries are exact roots of unity. Columns are unit norm by
/// construction.
inline SphericalCode fourier_matrix(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1) throw DimensionMismatchError("fourier_matrix requires positive dimensions");
    if (m > n) throw DimensionMismatchError("fourier_matrix requires m <= n");
    std::vector<int> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::mt19937_64 gen(seed);
    for (int i = 0; i < m; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(rows[i], rows[pick(gen)]);
    }
    rows.resize(m);
    std::sort(rows.begin(), rows.end());

    SphericalCode code(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int u = 0; u < n; ++u) {
        auto col = code.column(u);
        for (int w = 0; w < m; ++w) {
            long long prod = static_cast<long long>(rows[w]) * u % n;
            double phase = -2.0 * std::numbers::pi * static_cast<double>(prod) / n;
            col[w] = std::polar(scale, phase);
        }
    }
    return code;
}

enum class MatrixKind { Gaussian, Fourier, AnnBcasc, ReferenceBcasc };

inline const char* to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::Gaussian: return "gaussian";
        case MatrixKind::Fourier: return "fourier";
        case MatrixKind::AnnBcasc: return "ann-bcasc";
        case MatrixKind::ReferenceBcasc: return "reference-bcasc";
    }
    return "?";
}

inline MatrixKind matrix_kind_from_string(const std::string& s) {
    if (s == "gaussian") return MatrixKind::Gaussian;
    if (s == "fourier") return MatrixKind::Fourier;
    if (s == "ann-bcasc") return MatrixKind::AnnBcasc;
    if (s == "reference-bcasc") return MatrixKind::ReferenceBcasc;
    throw Error("unknown matrix kind: " + s);
}

/// Measurement-matrix factory. The Bcasc kinds run the force iteration seeded
/// with a Gaussian matrix drawn from the same seed.
inline SphericalCode make_matrix(MatrixKind kind, int m, int n, std::uint64_t seed,
                                 const ConstructionConfig& cfg = {}) {
    switch (kind) {
        case MatrixKind::Gaussian: return gaussian_matrix(m, n, seed);
        case MatrixKind::Fourier: return fourier_matrix(m, n, seed);
        case MatrixKind::AnnBcasc: return construct(gaussian_matrix(m, n, seed), cfg).code;
        case MatrixKind::ReferenceBcasc:
            return construct_reference(gaussian_matrix(m, n, seed), cfg).code;
    }
    throw Error("unknown matrix kind");
}

}  // namespace bcasc
