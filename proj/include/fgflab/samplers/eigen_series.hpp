#ifndef FGFLAB_SAMPLERS_EIGEN_SERIES_HPP
#define FGFLAB_SAMPLERS_EIGEN_SERIES_HPP

// Dirichlet eigenfunction series on the closed unit box [0,1]^d: the
// truncated expansion Y(x) = sum_n (-lambda_n)^{-s/2} beta_n e_n(x) over
// mode vectors n in {1..n_max}^d, with e_n the product-of-sines
// eigenfunctions of the Dirichlet Laplacian, lambda_n = -pi^2 |n|^2 their
// eigenvalues, and beta_n i.i.d. standard Gaussians.  The default exponent
// s = d/2 gives the log-correlated member of the family.  This lives on a
// bounded non-periodic box, so it gets its own evaluation-grid field type
// rather than the torus LatticeField.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/rng.hpp"

namespace fgf {

struct EigenSeriesConfig {
    int dim;
    int n_max;                       // retained modes per axis
    int points_per_axis = 33;        // evaluation lattice, both boundaries included
    std::optional<double> exponent;  // decay exponent s; defaults to d/2
    std::uint64_t seed = 0;

    double resolved_exponent() const { return exponent.value_or(0.5 * static_cast<double>(dim)); }

    void validate() const {
        if (dim < 1 || dim > 3) throw std::invalid_argument("EigenSeriesConfig: dim must be 1..3");
        if (n_max < 1) throw std::invalid_argument("EigenSeriesConfig: need at least one retained mode");
        if (points_per_axis < 3) throw std::invalid_argument("EigenSeriesConfig: need at least 3 points per axis");
        if (!(resolved_exponent() >= 0.0))
            throw std::invalid_argument("EigenSeriesConfig: negative decay exponent is not supported");
    }
};

/// Dirichlet Laplacian eigenvalue for mode vector n: -pi^2 |n|^2 < 0.
inline double dirichlet_eigenvalue(const std::array<int, 4>& n, int dim) {
    double k2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 1) throw std::invalid_argument("dirichlet_eigenvalue: mode components must be >= 1");
        k2 += static_cast<double>(n[a]) * static_cast<double>(n[a]);
    }
    return -9.86960440108935861883 * k2;  // -pi^2 |n|^2
}

/// Product-of-sines eigenfunction, unit L2 norm on the box.  Exactly zero
/// when any coordinate sits on the boundary.
inline double dirichlet_eigenfunction(const std::array<int, 4>& n, const std::array<double, 4>& x, int dim) {
    constexpr double pi = 3.14159265358979323846;
    double v = 1.0;
    for (int a = 0; a < dim; ++a) {
        if (x[a] <= 0.0 || x[a] >= 1.0) return 0.0;
        v *= 1.41421356237309504880 * std::sin(static_cast<double>(n[a]) * pi * x[a]);
    }
    return v;
}

/// Field sampled on the closed box evaluation lattice x_i = i/(m-1) per
/// axis, row-major with axis 0 slowest (the torus grid's convention).
struct BoxField {
    int dim = 1;
    int points_per_axis = 0;
    std::vector<double> values;
    std::string construction = "eigen";
    std::uint64_t seed = 0;
    double exponent = 0.0;
    int n_max = 0;

    std::size_t site_count() const {
        std::size_t n = 1;
        for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
        return n;
    }
    std::array<int, 4> unravel(std::size_t idx) const {
        std::array<int, 4> out{0, 0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            out[a] = static_cast<int>(idx % static_cast<std::size_t>(points_per_axis));
            idx /= static_cast<std::size_t>(points_per_axis);
        }
        return out;
    }
    std::array<double, 4> position(std::size_t idx) const {
        const std::array<int, 4> m = unravel(idx);
        std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) x[a] = static_cast<double>(m[a]) / static_cast<double>(points_per_axis - 1);
        return x;
    }
    bool on_boundary(std::size_t idx) const {
        const std::array<int, 4> m = unravel(idx);
        for (int a = 0; a < dim; ++a)
            if (m[a] == 0 || m[a] == points_per_axis - 1) return true;
        return false;
    }
};

/// Draw the truncated series.  beta_n is addressed by its mode vector, so
/// the same (seed, stream) yields a consistent mode coupling at every
/// truncation: deepening n_max only adds terms.
inline BoxField sample_dirichlet_series(const EigenSeriesConfig& cfg, std::uint64_t stream = 0) {
    cfg.validate();
    const int d = cfg.dim;
    const int m = cfg.points_per_axis;
    const double s = cfg.resolved_exponent();
    const SeededRng rng(cfg.seed, stream);

    // per-axis sine table, boundaries pinned to exact zero
    constexpr double pi = 3.14159265358979323846;
    std::vector<double> table(static_cast<std::size_t>(cfg.n_max) * static_cast<std::size_t>(m), 0.0);
    for (int n = 1; n <= cfg.n_max; ++n)
        for (int i = 1; i + 1 < m; ++i) {
            const double x = static_cast<double>(i) / static_cast<double>(m - 1);
            table[static_cast<std::size_t>(n - 1) * m + i] = 1.41421356237309504880 * std::sin(n * pi * x);
        }

    BoxField f;
    f.dim = d;
    f.points_per_axis = m;
    f.values.assign(f.site_count(), 0.0);
    f.seed = cfg.seed;
    f.exponent = s;
    f.n_max = cfg.n_max;

    std::array<int, 4> n{1, 1, 1, 1};
    for (;;) {
        std::array<std::int64_t, 4> idx{n[0], n[1], n[2], n[3]};
        const double beta = indexed_gaussian(rng, idx.data(), d);
        const double amp = std::pow(-dirichlet_eigenvalue(n, d), -0.5 * s) * beta;

        // accumulate amp * prod_a table[n_a][i_a] over all sites
        std::array<int, 4> i{0, 0, 0, 0};
        std::size_t flat = 0;
        for (;;) {
            double v = amp;
            for (int a = 0; a < d; ++a) v *= table[static_cast<std::size_t>(n[a] - 1) * m + i[a]];
            f.values[flat] += v;
            ++flat;
            int a = d - 1;
            for (; a >= 0; --a) {
                if (++i[a] < m) break;
                i[a] = 0;
            }
            if (a < 0) break;
        }

        int a = d - 1;
        for (; a >= 0; --a) {
            if (++n[a] <= cfg.n_max) break;
            n[a] = 1;
        }
        if (a < 0) break;
    }
    return f;
}

}  // namespace fgf

#endif
