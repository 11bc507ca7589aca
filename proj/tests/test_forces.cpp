#include <bcasc/ann.hpp>
#include <bcasc/forces.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace bcasc;

namespace {

// Naive double summation in complex arithmetic, no rescaling: the oracle for
// the overflow-protected packed implementation.
struct NaiveForce {
    CVec direction;
    double magnitude;
};

NaiveForce naive_force(const SphericalCode& code, int u, int nu, int n_rot) {
    const int m = code.dim();
    CVec sum(m, Complex(0.0, 0.0));
    auto cu = code.column(u);
    for (int v = 0; v < code.size(); ++v) {
        if (v == u) continue;
        auto cv = code.column(v);
        for (int k = 0; k < n_rot; ++k) {
            Complex rot = std::polar(1.0, 2.0 * std::numbers::pi * k / n_rot);
            CVec diff(m);
            double d2 = 0.0;
            for (int w = 0; w < m; ++w) {
                diff[w] = cu[w] - cv[w] * rot;
                d2 += std::norm(diff[w]);
            }
            double scale = std::pow(std::sqrt(d2), -static_cast<double>(nu));
            for (int w = 0; w < m; ++w) sum[w] += diff[w] * scale;
        }
    }
    NaiveForce out;
    out.magnitude = norm2(sum);
    for (auto& z : sum) z /= out.magnitude;
    out.direction = std::move(sum);
    return out;
}

double rel_direction_error(const CVec& a, const CVec& b) {
    double err = 0.0;
    for (std::size_t w = 0; w < a.size(); ++w) err += std::norm(a[w] - b[w]);
    return std::sqrt(err);
}

}  // namespace

TEST_CASE("full force matches the naive summation oracle") {
    std::mt19937_64 gen(555);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + static_cast<int>(gen() % 4);
        int n = 3 + static_cast<int>(gen() % 8);
        int nrot = 2 + static_cast<int>(gen() % 7);
        SphericalCode code = random_spherical_code(m, n, gen());
        int u = static_cast<int>(gen() % static_cast<unsigned>(n));
        for (int nu : {2, 4, 8, 16}) {
            Force got = force_full(code, u, nu, nrot);
            NaiveForce want = naive_force(code, u, nu, nrot);
            INFO("m=" << m << " n=" << n << " nrot=" << nrot << " nu=" << nu << " u=" << u);
            CHECK(rel_direction_error(got.direction, want.direction) <= 1e-10);
            CHECK(std::abs(std::exp(got.raw_scale_log) - want.magnitude) <=
                  1e-10 * want.magnitude);
            CHECK(norm2(got.direction) == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("force stays finite where the naive summation overflows") {
    SphericalCode code = random_spherical_code(3, 6, 9);
    // nu = 1024 makes 1/d^nu overflow for d < 1: the rescaled path must not
    Force f = force_full(code, 0, 1024, 16);
    CHECK(std::isfinite(f.raw_scale_log));
    CHECK(norm2(f.direction) == Catch::Approx(1.0).margin(1e-12));
    for (const auto& z : f.direction) {
        CHECK(std::isfinite(z.real()));
        CHECK(std::isfinite(z.imag()));
    }
    // the dominant term direction: nearest rotated neighbor repels strongest,
    // so the force must have positive overlap with (c_u - nearest point)
    RotationSet set;
    set.rebuild(code, 16);
    auto q = pack_complex(code.column(0));
    NeighborList nb;
    brute_knn_search(set, q.data(), 1, 0, nb);
    CVec nearest = unpack_complex(std::span<const double>(set.point(nb[0].index), 6));
    CVec away(3);
    for (int w = 0; w < 3; ++w) away[w] = code.column(0)[w] - nearest[w];
    Complex overlap = inner_product(away, f.direction);
    CHECK(overlap.real() > 0.0);
}

TEST_CASE("ann force with a saturated neighbor list equals the full force bitwise") {
    SphericalCode code = random_spherical_code(4, 7, 21);
    RotationSet set;
    set.rebuild(code, 8);
    for (int u = 0; u < code.size(); ++u) {
        auto q = pack_complex(code.column(u));
        NeighborList nb;
        brute_knn_search(set, q.data(), 6 * 8, u, nb);  // every foreign rotation
        Force ann = force_ann(set, q, nb, 4);
        Force full = force_full(code, u, 4, 8);
        REQUIRE(ann.direction.size() == full.direction.size());
        for (std::size_t w = 0; w < ann.direction.size(); ++w) {
            CHECK(ann.direction[w].real() == full.direction[w].real());
            CHECK(ann.direction[w].imag() == full.direction[w].imag());
        }
        CHECK(ann.raw_scale_log == full.raw_scale_log);
    }
}

TEST_CASE("force error conditions") {
    SphericalCode code = random_spherical_code(3, 4, 2);

    // odd or sub-2 exponents rejected
    CHECK_THROWS_AS(force_full(code, 0, 3, 8), Error);
    CHECK_THROWS_AS(force_full(code, 0, 0, 8), Error);

    // a codeword coinciding with a rotation of another is a hard error
    SphericalCode bad = code;
    auto dst = bad.column(1);
    Complex rot = std::polar(1.0, 2.0 * std::numbers::pi * 3 / 8);
    for (int w = 0; w < 3; ++w) dst[w] = bad.column(0)[w] * rot;
    CHECK_THROWS_AS(force_full(bad, 0, 4, 8), CoincidentRotationError);

    // no neighbors at all
    RotationSet set;
    set.rebuild(code, 4);
    auto q = pack_complex(code.column(0));
    NeighborList empty;
    CHECK_THROWS_AS(force_ann(set, q, empty, 4), EmptyNeighborhoodError);
}

TEST_CASE("ann force ignores neighbor list order") {
    // entries arrive in canonical order internally, so a shuffled list of the
    // same neighbors must give bitwise-identical output
    SphericalCode code = random_spherical_code(3, 9, 33);
    RotationSet set;
    set.rebuild(code, 4);
    auto q = pack_complex(code.column(2));
    NeighborList nb;
    brute_knn_search(set, q.data(), 10, 2, nb);
    Force base = force_ann(set, q, nb, 8);

    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 5; ++trial) {
        NeighborList shuffled = nb;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        Force f = force_ann(set, q, shuffled, 8);
        for (std::size_t w = 0; w < f.direction.size(); ++w) {
            CHECK(f.direction[w].real() == base.direction[w].real());
            CHECK(f.direction[w].imag() == base.direction[w].imag());
        }
        CHECK(f.raw_scale_log == base.raw_scale_log);
    }
}
