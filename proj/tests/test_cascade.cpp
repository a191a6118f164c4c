// Dyadic cascade: split-level combinatorics, exact covariance law, kernel
// pairing oracle, and cube-convention behavior.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fgflab/analysis/estimate.hpp"
#include "fgflab/core/test_functions.hpp"
#include "fgflab/samplers/cascade.hpp"

using namespace fgf;

TEST_CASE("split level hand cases", "[cascade]") {
    REQUIRE(split_level(Point{0.3, 0, 0, 0}, Point{0.6, 0, 0, 0}, 1) == 1);
    REQUIRE(split_level(Point{0.3, 0, 0, 0}, Point{0.4, 0, 0, 0}, 1) == 3);
    REQUIRE(split_level(Point{0.3, 0.3, 0, 0}, Point{0.6, 0.6, 0, 0}, 2) == 1);
    REQUIRE_THROWS_AS(split_level(Point{0.3, 0.3, 0, 0}, Point{0.3, 0.3, 0, 0}, 2), std::invalid_argument);
}

TEST_CASE("split level tracks -log2 of the separation", "[cascade]") {
    const SeededRng rng(808, 0);
    int worst = -100;
    for (int i = 0; i < 400; ++i) {
        Point a{rng.uniform(4 * i), rng.uniform(4 * i + 1), 0, 0};
        Point b{rng.uniform(4 * i + 2), rng.uniform(4 * i + 3), 0, 0};
        const double rinf = std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
        const int L = split_level(a, b, 2);
        // upper bound is deterministic: cubes of side < r_inf must separate
        REQUIRE(L <= static_cast<int>(std::ceil(std::log2(1.0 / rinf))) + 1);
        worst = std::max(worst, static_cast<int>(std::abs(L - std::log2(1.0 / rinf))));
    }
    // regression bound for this seed: early splits stay mild for random pairs
    REQUIRE(worst <= 8);
}

TEST_CASE("cube conventions differ where expected", "[cascade]") {
    // 0.49 and 0.51 straddle the centered-cube boundary at level 0 (cubes
    // [-0.5,0.5), [0.5,1.5)) but the corner-cube boundary only at level 1.
    const Point a{0.49, 0, 0, 0}, b{0.51, 0, 0, 0};
    REQUIRE(split_level(a, b, 1, CubeOrigin::corner) == 1);
    REQUIRE(split_level(a, b, 1, CubeOrigin::centered) == 0);
}

TEST_CASE("levels are piecewise constant with unit variance", "[cascade]") {
    const CascadeConfig cfg{1, -2, 8, CubeOrigin::corner, 1.0, 99};
    // same level-3 cube -> identical values; different cubes -> independent
    const std::vector<Point> pts{Point{0.51, 0, 0, 0}, Point{0.55, 0, 0, 0}, Point{0.70, 0, 0, 0}};
    const int m = 10000;
    double v0 = 0.0, cross_same = 0.0, cross_diff = 0.0;
    for (int s = 0; s < m; ++s) {
        const auto y = sample_level_at(cfg, 3, pts, s);
        REQUIRE(y[0] == y[1]);  // cube [0.5, 0.625)
        v0 += y[0] * y[0];
        cross_same += y[0] * y[1];
        cross_diff += y[0] * y[2];
    }
    REQUIRE(std::abs(v0 / m - 1.0) < 5.0 * std::sqrt(2.0 / m));
    REQUIRE(std::abs(cross_diff / m) < 5.0 / std::sqrt(static_cast<double>(m)));
    REQUIRE(cross_same / m == Catch::Approx(v0 / m));
}

TEST_CASE("level values agree across overlapping query sets", "[cascade]") {
    const CascadeConfig cfg{2, 0, 6, CubeOrigin::corner, 1.0, 7};
    const Point p{0.37, 0.81, 0, 0};
    const std::vector<Point> q1{p, Point{0.1, 0.1, 0, 0}};
    const std::vector<Point> q2{Point{0.9, 0.2, 0, 0}, p};
    const auto a = sample_cascade_at(cfg, q1, 5);
    const auto b = sample_cascade_at(cfg, q2, 5);
    REQUIRE(a[0] == b[1]);
}

TEST_CASE("dyadic self-similarity of cube addressing", "[cascade]") {
    // Y_k is Y_0 spatially rescaled by 2^-k: the cube address of x/2^k at
    // level k equals the address of x at level 0 (exact dyadic scaling).
    const SeededRng rng(5, 5);
    for (int i = 0; i < 200; ++i) {
        const double x = 8.0 * rng.uniform(i);
        for (int k : {1, 3, 7}) {
            REQUIRE(cube_index(std::ldexp(x, -k), k, CubeOrigin::corner) ==
                    cube_index(x, 0, CubeOrigin::corner));
        }
    }
}

TEST_CASE("partial sums obey the shared-level covariance law", "[cascade]") {
    const int n = 6;
    const CascadeConfig cfg = symmetric_cascade(1, n, 4242);
    const std::vector<Point> pts{Point{0.30, 0, 0, 0}, Point{0.60, 0, 0, 0}, Point{0.40, 0, 0, 0},
                                 Point{0.32, 0, 0, 0}, Point{0.36, 0, 0, 0}};
    const std::pair<std::size_t, std::size_t> wanted[] = {{0, 0}, {0, 1}, {0, 2}, {3, 4}, {1, 2}};
    auto eval = [&](std::uint64_t s, std::span<double> out) {
        const auto v = sample_cascade_at(cfg, pts, s);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    };
    const auto est = estimate_product_moments(eval, pts.size(), wanted, 20000);
    for (const auto& e : est) {
        const double expect = cascade_covariance(cfg, pts[e.first], pts[e.second]);
        INFO("pair (" << e.first << "," << e.second << ") expect " << expect << " got " << e.value);
        REQUIRE(std::abs(e.value - expect) < 5.0 * e.standard_error);
    }
    // frozen values behind the oracle: Var = 2n+1, Cov(0.3,0.6) = n+1
    REQUIRE(cascade_covariance(cfg, pts[0], pts[0]) == 2.0 * n + 1.0);
    REQUIRE(cascade_covariance(cfg, pts[0], pts[1]) == n + 1.0);
    REQUIRE(cascade_covariance(cfg, pts[0], pts[2]) == n + 3.0);
}

TEST_CASE("2D partial sum covariance at the frozen example", "[cascade]") {
    const CascadeConfig cfg = symmetric_cascade(2, 5, 31);
    const Point x1{0.3, 0.3, 0, 0}, x2{0.6, 0.6, 0, 0};
    REQUIRE(cascade_covariance(cfg, x1, x2) == 6.0);  // n + L = 5 + 1
    const std::vector<Point> pts{x1, x2};
    const std::pair<std::size_t, std::size_t> wanted[] = {{0, 1}};
    auto eval = [&](std::uint64_t s, std::span<double> out) {
        const auto v = sample_cascade_at(cfg, pts, s);
        out[0] = v[0];
        out[1] = v[1];
    };
    const auto est = estimate_product_moments(eval, 2, wanted, 20000)[0];
    REQUIRE(std::abs(est.value - 6.0) < 5.0 * est.standard_error);
}

TEST_CASE("difference covariances cancel the shared deep levels", "[cascade]") {
    const CascadeConfig cfg = symmetric_cascade(1, 7, 11);
    const Point x1{0.30, 0, 0, 0}, x2{0.55, 0, 0, 0}, x3{0.40, 0, 0, 0}, x4{0.62, 0, 0, 0};
    const double expect = static_cast<double>(split_level(x1, x3, 1)) - split_level(x1, x4, 1) -
                          split_level(x2, x3, 1) + split_level(x2, x4, 1);
    const std::vector<Point> pts{x1, x2, x3, x4};
    auto eval = [&](std::uint64_t s, std::span<double> out) {
        const auto v = sample_cascade_at(cfg, pts, s);
        out[0] = v[0] - v[1];
        out[1] = v[2] - v[3];
    };
    const std::pair<std::size_t, std::size_t> wanted[] = {{0, 1}};
    const auto est = estimate_product_moments(eval, 2, wanted, 30000)[0];
    REQUIRE(std::abs(est.value - expect) < 5.0 * est.standard_error);
}

TEST_CASE("kernel pairing: 16-site enumeration fixture", "[cascade]") {
    // N=16, L=1.  phi1 = +1 at site 8 (x=0.5), -1 at site 11 (x=0.6875);
    // phi2 = +1 at site 10 (x=0.625), -1 at site 12 (x=0.75).
    // Split levels: L(.5,.625)=3, L(.5,.75)=2, L(.6875,.625)=4, L(.6875,.75)=2,
    // so the weighted sum is 3 - 2 - 4 + 2 = -1 and the pairing is -1/256.
    const LatticeGrid g(1, 16, 1.0);
    std::vector<double> v1(16, 0.0), v2(16, 0.0);
    v1[8] = 1.0;
    v1[11] = -1.0;
    v2[10] = 1.0;
    v2[12] = -1.0;
    const TestFunction p1(g, std::move(v1)), p2(g, std::move(v2));
    REQUIRE(cascade_kernel_pairing(p1, p2) == Catch::Approx(-1.0 / 256.0).epsilon(1e-14));
    REQUIRE(cascade_kernel_pairing(p2, p1) == Catch::Approx(-1.0 / 256.0).epsilon(1e-14));

    std::vector<double> dbl(16, 0.0);
    dbl[8] = 2.0;
    dbl[11] = -2.0;
    const TestFunction p1x2(g, std::move(dbl));
    REQUIRE(cascade_kernel_pairing(p1x2, p2) == Catch::Approx(-2.0 / 256.0).epsilon(1e-14));
}

TEST_CASE("kernel pairing rejects overlapping supports", "[cascade]") {
    const LatticeGrid g(1, 16, 1.0);
    std::vector<double> v(16, 0.0);
    v[3] = 1.0;
    v[7] = -1.0;
    const TestFunction p(g, std::vector<double>(v));
    REQUIRE_THROWS_AS(cascade_kernel_pairing(p, p), std::invalid_argument);
}

TEST_CASE("pairing covariances match the kernel oracle", "[cascade]") {
    const LatticeGrid g(1, 64, 1.0);
    std::vector<double> v1(64, 0.0), v2(64, 0.0);
    v1[16] = 1.0;   // x = 0.25
    v1[20] = -1.0;  // x = 0.3125
    v2[18] = 1.0;   // x = 0.28125
    v2[40] = -1.0;  // x = 0.625
    const TestFunction p1(g, std::move(v1)), p2(g, std::move(v2));
    // cross split levels: L(.25,.28125)=5, L(.25,.625)=1, L(.3125,.28125)=4,
    // L(.3125,.625)=1, so the kernel sum is 5-1-4+1 = 1 and dx^2 = 1/4096.
    const double oracle = cascade_kernel_pairing(p1, p2);
    REQUIRE(oracle == Catch::Approx(1.0 / 4096.0).epsilon(1e-14));
    // all split levels within n=6, and the finest cube (2^-6) matches dx
    const CascadeConfig cfg = symmetric_cascade(1, 6, 606);
    auto sampler = [&](std::uint64_t s) { return sample_cascade_on_grid(cfg, g, s); };
    const auto est = estimate_covariance(sampler, p1, p2, 20000);
    REQUIRE(std::abs(est.value - oracle) < 5.0 * est.standard_error);
}

TEST_CASE("grid sampling enforces level resolvability", "[cascade]") {
    const LatticeGrid g(1, 16, 1.0);  // dx = 1/16
    const CascadeConfig cfg = symmetric_cascade(1, 5, 1);  // finest cube 1/32
    REQUIRE_THROWS_AS(sample_cascade_on_grid(cfg, g, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_level_on_grid(cfg, 5, g, 0), std::invalid_argument);
    REQUIRE_NOTHROW(sample_level_on_grid(cfg, 4, g, 0));
}

TEST_CASE("weighted cascade covariance uses alpha powers", "[cascade]") {
    CascadeConfig cfg{1, -1, 4, CubeOrigin::corner, 0.5, 3};
    const Point a{0.30, 0, 0, 0}, b{0.40, 0, 0, 0};  // split level 3
    // levels -1..2 shared: sum alpha^{2k} = 4 + 1 + 0.25 + 0.0625
    REQUIRE(cascade_covariance(cfg, a, b) == Catch::Approx(5.3125).epsilon(1e-14));
}
