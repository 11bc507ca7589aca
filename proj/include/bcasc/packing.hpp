#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "code.hpp"

namespace bcasc {

/// c in C^m -> [Re(c); Im(c)] in R^(2m). Linear and norm-preserving.
inline void pack_complex(std::span<const Complex> c, std::span<double> out) {
    const std::size_t m = c.size();
    if (out.size() != 2 * m) throw DimensionMismatchError("pack target must have length 2m");
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = c[j].real();
        out[m + j] = c[j].imag();
    }
}

inline std::vector<double> pack_complex(std::span<const Complex> c) {
    std::vector<double> out(2 * c.size());
    pack_complex(c, out);
    return out;
}

inline CVec unpack_complex(std::span<const double> p) {
    if (p.size() % 2 != 0) throw DimensionMismatchError("packed vector must have even length");
    const std::size_t m = p.size() / 2;
    CVec c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = Complex(p[j], p[m + j]);
    return c;
}

/// Squared Euclidean distance between packed vectors, accumulated in index
/// order. Deliberately noinline: every caller (tree search, exhaustive
/// enumeration, force assembly) shares one code path so that equal inputs give
/// bitwise-equal outputs regardless of surrounding optimization context.
[[gnu::noinline]] inline double sqdist(const double* a, const double* b, int len) {
    double s = 0.0;
    for (int j = 0; j < len; ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

/// Evenly spaced rotation phases 2*pi*k/n_rot, k = 0..n_rot-1.
inline std::vector<double> rotation_phases(int n_rot) {
    if (n_rot < 1) throw DimensionMismatchError("n_rot must be >= 1");
    std::vector<double> ph(n_rot);
    for (int k = 0; k < n_rot; ++k)
        ph[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_rot);
    return ph;
}

/// All n*n_rot phase rotations c_u * e^{i phi_k} of a code, packed into R^(2m).
/// Point index i = u*n_rot + k (codeword-major, rotation-minor).
class RotationSet {
  public:
    RotationSet() = default;

    RotationSet(const SphericalCode& code, int n_rot) { rebuild(code, n_rot); }

    void rebuild(const SphericalCode& code, int n_rot) {
        m_ = code.dim();
        n_ = code.size();
        if (n_rot != n_rot_) {
            n_rot_ = n_rot;
            auto phases = rotation_phases(n_rot);
            rot_.resize(n_rot);
            for (int k = 0; k < n_rot; ++k) rot_[k] = std::polar(1.0, phases[k]);
        }
        const std::size_t dim = static_cast<std::size_t>(2) * m_;
        coords_.resize(dim * static_cast<std::size_t>(n_) * n_rot_);
        for (int u = 0; u < n_; ++u) {
            auto col = code.column(u);
            for (int k = 0; k < n_rot_; ++k) {
                double* p = coords_.data() + dim * (static_cast<std::size_t>(u) * n_rot_ + k);
                for (int j = 0; j < m_; ++j) {
                    Complex z = col[j] * rot_[k];
                    p[j] = z.real();
                    p[m_ + j] = z.imag();
                }
            }
        }
    }

    int dim() const { return 2 * m_; }          ///< packed dimension
    int ambient_dim() const { return m_; }      ///< complex dimension m
    int codewords() const { return n_; }
    int rotations() const { return n_rot_; }
    int size() const { return n_ * n_rot_; }

    const double* point(int i) const { return coords_.data() + static_cast<std::size_t>(dim()) * i; }
    int owner(int i) const { return i / n_rot_; }
    int rotation(int i) const { return i % n_rot_; }
    Complex rotation_factor(int k) const { return rot_[k]; }

  private:
    int m_ = 0, n_ = 0, n_rot_ = 0;
    std::vector<double> coords_;
    std::vector<Complex> rot_;
};

}  // namespace bcasc
