// Lattice geometry, the raw FFT, and the physical transform contract:
// unitarity, Parseval, mode placement, and the weighted spectral product.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "fgflab/core/fft.hpp"
#include "fgflab/core/field.hpp"
#include "fgflab/core/grid.hpp"
#include "fgflab/core/rng.hpp"
#include "fgflab/core/spectrum.hpp"
#include "fgflab/samplers/spectral.hpp"

using namespace fgf;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("grid validates its arguments", "[grid]") {
    REQUIRE_THROWS_AS(LatticeGrid(0, 8, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(LatticeGrid(5, 8, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(LatticeGrid(2, 12, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(LatticeGrid(2, 8, 0.0), std::invalid_argument);
}

TEST_CASE("ravel and unravel are inverse", "[grid]") {
    const LatticeGrid g(3, 8, 2.0);
    for (std::size_t i = 0; i < g.site_count(); i += 7) {
        const auto mi = g.unravel(i);
        REQUIRE(g.ravel({mi.data(), 3}) == i);
    }
    REQUIRE(g.site_count() == 512);
    REQUIRE(g.spacing() == 0.25);
}

TEST_CASE("minimum image distance respects periodicity", "[grid]") {
    const LatticeGrid g(2, 16, 4.0);
    const Point a{0.25, 0.25, 0, 0};
    const Point b{3.75, 0.25, 0, 0};  // nearest image is across the seam
    REQUIRE(g.torus_distance(a, b) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("raw fft of a pure mode concentrates on one bin", "[fft]") {
    const std::size_t n = 64;
    std::vector<std::complex<double>> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * pi * 3.0 * j / n;
        x[j] = {std::cos(th), std::sin(th)};  // e^{+i 2pi 3 j / n}
    }
    fft(x.data(), n, /*inverse=*/false);
    for (std::size_t k = 0; k < n; ++k) {
        const double expected = (k == 3) ? static_cast<double>(n) : 0.0;
        REQUIRE(std::abs(x[k] - std::complex<double>(expected, 0.0)) < 1e-10 * n);
    }
}

TEST_CASE("nd transform round-trips random data", "[fft]") {
    const LatticeGrid g(3, 16, 1.0);
    const SeededRng rng(7, 0);
    std::vector<std::complex<double>> x(g.site_count());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a, b;
        rng.gaussian_pair(i, a, b);
        x[i] = {a, b};
    }
    auto y = x;
    fft_nd(y.data(), g, false);
    fft_nd(y.data(), g, true);
    const double norm = static_cast<double>(g.site_count());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] / norm - x[i]));
    REQUIRE(worst < 1e-12);
}

TEST_CASE("physical transform is unitary", "[spectrum]") {
    for (int d : {1, 2, 3}) {
        const LatticeGrid g(d, d == 3 ? 16 : 64, 2.5);
        const SeededRng rng(13, d);
        std::vector<double> v(g.site_count());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.gaussian(i);
        const LatticeField f(g, v);
        const LatticeField back = dft_inverse_real(dft_forward(f));
        double worst = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - v[i]));
        REQUIRE(worst < 1e-10);

        // Parseval: dx^d sum f^2 = dk^d sum |fhat|^2
        const SpectralArray sp = dft_forward(f);
        double site = 0.0, mode = 0.0;
        for (double x : v) site += x * x;
        for (const auto& c : sp.coeff) mode += std::norm(c);
        site *= g.cell_volume();
        mode *= mode_volume(g);
        REQUIRE(site == Catch::Approx(mode).epsilon(1e-10));
    }
}

TEST_CASE("constant field has all mass on the zero mode", "[spectrum]") {
    const LatticeGrid g(2, 32, 1.0);
    const LatticeField f(g, std::vector<double>(g.site_count(), 3.5));
    const SpectralArray sp = dft_forward(f);
    for (std::size_t i = 1; i < sp.coeff.size(); ++i) REQUIRE(std::abs(sp.coeff[i]) < 1e-12);
    REQUIRE(std::abs(sp.coeff[0]) > 0.0);
}

TEST_CASE("cosine mode splits equally between +1 and -1 bins", "[spectrum]") {
    const LatticeGrid g(1, 64, 2.0);
    std::vector<double> v(g.site_count());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(2.0 * pi * g.position(j)[0] / g.box_length());
    const SpectralArray sp = dft_forward(LatticeGrid(g), std::vector<double>(v));
    double total = 0.0;
    for (const auto& c : sp.coeff) total += std::norm(c);
    // bins 1 and N-1 carry the +-1 frequencies
    REQUIRE(std::norm(sp.coeff[1]) == Catch::Approx(0.5 * total).epsilon(1e-10));
    REQUIRE(std::norm(sp.coeff[63]) == Catch::Approx(0.5 * total).epsilon(1e-10));
    REQUIRE(signed_frequency(g, 63) == -1);
}

TEST_CASE("weighted spectral product on a unit sine mode", "[spectrum]") {
    // f = g = sin(2 pi x / L) scaled to unit discrete L2 norm; weight |k|^2.
    // Only the |n| = 1 pair contributes and the value is (2 pi / L)^2.
    const double L = 2.0;
    const LatticeGrid g(1, 128, L);
    std::vector<double> v(g.site_count());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(2.0 * pi * g.position(j)[0] / L);
    TestFunction f = project_mean_zero(g, std::move(v));
    const double nrm = std::sqrt(f.l2_norm_sq());
    std::vector<double> scaled = f.values();
    for (double& x : scaled) x /= nrm;
    TestFunction fu(g, std::move(scaled));
    REQUIRE(fu.l2_norm_sq() == Catch::Approx(1.0).epsilon(1e-12));

    const double got = sobolev_inner_product(fu, fu, SpectralExponent{1.0});
    const double expect = (2.0 * pi / L) * (2.0 * pi / L);
    REQUIRE(got == Catch::Approx(expect).epsilon(1e-10));
}

TEST_CASE("weighted spectral product is symmetric and vanishes at zero", "[spectrum]") {
    const LatticeGrid g(2, 16, 1.0);
    const SeededRng rng(3, 1);
    std::vector<double> a(g.site_count()), b(g.site_count());
    for (std::size_t i = 0; i < a.size(); ++i) rng.gaussian_pair(i, a[i], b[i]);
    const TestFunction fa = project_mean_zero(g, std::move(a));
    const TestFunction fb = project_mean_zero(g, std::move(b));
    const double ab = sobolev_inner_product(fa, fb, SpectralExponent{0.75});
    const double ba = sobolev_inner_product(fb, fa, SpectralExponent{0.75});
    REQUIRE(ab == Catch::Approx(ba).epsilon(1e-12));
    REQUIRE(sobolev_inner_product(fa, fa, SpectralExponent{0.75}) > 0.0);

    const TestFunction zero(g, std::vector<double>(g.site_count(), 0.0));
    REQUIRE(sobolev_inner_product(zero, zero, SpectralExponent{1.0}) == 0.0);
}

TEST_CASE("hermitian unit noise inverts to a real field with unit mode variance", "[spectrum]") {
    const LatticeGrid g(2, 32, 1.0);
    double acc = 0.0;
    const int m = 200;
    for (int s = 0; s < m; ++s) {
        const SpectralArray w = sample_hermitian_unit_noise(g, SeededRng(77, s));
        REQUIRE_NOTHROW(dft_inverse_real(w));  // conjugate symmetry
        for (const auto& c : w.coeff) acc += std::norm(c);
    }
    const double per_mode = acc / (m * static_cast<double>(g.site_count()));
    REQUIRE(per_mode == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("white noise spectrum has per-mode variance 1/dk^d", "[spectrum]") {
    const LatticeGrid g(1, 64, 2.0);
    const int m = 400;
    double acc = 0.0;
    for (int s = 0; s < m; ++s) {
        const LatticeField w = sample_white_noise(g, 31, s);
        const SpectralArray sp = dft_forward(w);
        for (const auto& c : sp.coeff) acc += std::norm(c);
    }
    const double per_mode = acc / (m * static_cast<double>(g.site_count()));
    REQUIRE(per_mode == Catch::Approx(1.0 / mode_volume(g)).epsilon(0.02));
}

TEST_CASE("nearest site rounds per axis and wraps", "[grid]") {
    const LatticeGrid g(2, 8, 4.0);  // spacing 0.5
    REQUIRE(g.nearest_site(Point{0.0, 0.0, 0, 0}) == 0);
    REQUIRE(g.nearest_site(Point{0.24, 0.0, 0, 0}) == 0);
    REQUIRE(g.nearest_site(Point{0.26, 0.0, 0, 0}) == g.ravel(std::array<int, 4>{1, 0, 0, 0}));
    REQUIRE(g.nearest_site(Point{1.0, 3.5, 0, 0}) == g.ravel(std::array<int, 4>{2, 7, 0, 0}));
    // wrap: 3.9 rounds to index 8 == 0; negative wraps to the top row
    REQUIRE(g.nearest_site(Point{3.9, 0.0, 0, 0}) == 0);
    REQUIRE(g.nearest_site(Point{-0.5, 0.0, 0, 0}) == g.ravel(std::array<int, 4>{7, 0, 0, 0}));
    // round trip: every site position maps back to its own index
    const LatticeGrid g3(3, 4, 1.0);
    for (std::size_t i = 0; i < g3.site_count(); ++i) REQUIRE(g3.nearest_site(g3.position(i)) == i);
}
