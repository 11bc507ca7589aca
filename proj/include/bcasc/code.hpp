#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace bcasc {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// A set of n unit-norm codewords in C^m, stored column-major.
class SphericalCode {
  public:
    SphericalCode() = default;
    SphericalCode(int m, int n) : m_(m), n_(n), data_(static_cast<std::size_t>(m) * n) {
        if (m < 1 || n < 1) throw DimensionMismatchError("code dimensions must be positive");
    }

    int dim() const { return m_; }    ///< ambient dimension m
    int size() const { return n_; }   ///< number of codewords n

    std::span<Complex> column(int u) {
        return {data_.data() + static_cast<std::size_t>(u) * m_, static_cast<std::size_t>(m_)};
    }
    std::span<const Complex> column(int u) const {
        return {data_.data() + static_cast<std::size_t>(u) * m_, static_cast<std::size_t>(m_)};
    }

    std::vector<Complex>& data() { return data_; }
    const std::vector<Complex>& data() const { return data_; }

    bool operator==(const SphericalCode& other) const = default;

  private:
    int m_ = 0, n_ = 0;
    std::vector<Complex> data_;
};

/// <a,b> = sum_w conj(a_w) * b_w
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimensionMismatchError("inner product of vectors with different lengths");
    Complex s{0.0, 0.0};
    for (std::size_t w = 0; w < a.size(); ++w) s += std::conj(a[w]) * b[w];
    return s;
}

inline double norm2(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

inline void normalize_in_place(std::span<Complex> a) {
    double nrm = norm2({a.data(), a.size()});
    if (nrm < 1e-300) throw ZeroVectorError();
    for (auto& z : a) z /= nrm;
}

inline CVec normalize(CVec a) {
    normalize_in_place(a);
    return a;
}

struct CoherenceReport {
    double mu = 0.0;
    int u = -1, v = -1;  ///< argmax pair, u < v; first such pair in scan order on ties
};

/// mu(A) = max_{u<v} |<c_u, c_v>| over unit-norm columns.
inline CoherenceReport coherence(const SphericalCode& code) {
    const int n = code.size();
    if (n < 2) throw TooFewCodewordsError();
    CoherenceReport rep;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            double a = std::abs(inner_product(code.column(u), code.column(v)));
            if (a > rep.mu) {
                rep.mu = a;
                rep.u = u;
                rep.v = v;
            }
        }
    }
    if (rep.u < 0) rep.u = 0, rep.v = 1;  // all inner products exactly zero
    return rep;
}

/// g_nu = sum_{u<v} ||c_u - c_v||^(2-nu). Requires all pairwise distances > 0.
inline double potential_energy(const SphericalCode& code, int nu) {
    const int n = code.size();
    if (n < 2) throw TooFewCodewordsError();
    double g = 0.0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            auto cu = code.column(u);
            auto cv = code.column(v);
            double d2 = 0.0;
            for (int w = 0; w < code.dim(); ++w) d2 += std::norm(cu[w] - cv[w]);
            double d = std::sqrt(d2);
            if (d < 1e-12)
                throw CoincidentCodewordsError("codewords " + std::to_string(u) + " and " +
                                               std::to_string(v) + " coincide");
            g += std::pow(d, 2.0 - static_cast<double>(nu));
        }
    }
    return g;
}

/// i.i.d. standard complex Gaussian entries, columns normalized to unit norm.
inline SphericalCode random_spherical_code(int m, int n, std::uint64_t seed) {
    SphericalCode code(m, n);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int u = 0; u < n; ++u) {
        auto col = code.column(u);
        for (int w = 0; w < m; ++w) {
            double re = nd(gen);
            double im = nd(gen);
            col[w] = Complex(re, im);
        }
        normalize_in_place(col);
    }
    return code;
}

}  // namespace bcasc
