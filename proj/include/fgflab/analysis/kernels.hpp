#ifndef FGFLAB_ANALYSIS_KERNELS_HPP
#define FGFLAB_ANALYSIS_KERNELS_HPP

// Deterministic quadrature oracles: the -log covariance kernel, geometric
// overlap volumes, and the adaptive Simpson rule they are built on.  These
// are the independent reference values the Monte-Carlo estimates are fitted
// against; none of them touch the samplers.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/test_functions.hpp"

namespace fgf {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Cell average of -log|u| over the unit cube [-1/2,1/2]^d.  Analytic in
/// d=1; midpoint refinement with Richardson extrapolation otherwise, cached.
/// The diagonal cell of the -log kernel quadrature is -log(dx) + this.
inline double log_cell_average_offset(int d) {
    if (d == 1) return 1.0 + 0.69314718055994530942;  // 1 + log 2
    if (d < 1 || d > 3) throw std::invalid_argument("log_cell_average_offset: d must be 1..3");
    static double cache[4] = {0.0, 0.0, 0.0, 0.0};
    if (cache[d] != 0.0) return cache[d];
    auto level = [d](int n) {
        // midpoint rule; the cell containing the origin is never hit since n is even
        const double h = 1.0 / n;
        double acc = 0.0;
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (;;) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double x = -0.5 + (idx[static_cast<std::size_t>(a)] + 0.5) * h;
                r2 += x * x;
            }
            acc += -0.5 * std::log(r2);
            int a = 0;
            for (; a < d; ++a) {
                if (++idx[static_cast<std::size_t>(a)] < n) break;
                idx[static_cast<std::size_t>(a)] = 0;
            }
            if (a == d) break;
        }
        double cell = 1.0;
        for (int a = 0; a < d; ++a) cell *= h;
        return acc * cell;
    };
    const double r1 = level(128), r2 = level(256);
    cache[d] = r2 + (r2 - r1) / 3.0;  // O(h^2) Richardson
    return cache[d];
}

/// Double Riemann sum of -log|y-z| phi1(y) phi2(z) dx^{2d} on the lattice,
/// minimum-image metric, shared cells regularized by the exact cell average
/// of the kernel.  Supports must stay within L/4 of the box center on every
/// axis (the central quarter by area in 2D) so torus corrections stay well
/// below the fit tolerances.
inline double log_kernel_pairing(const TestFunction& phi1, const TestFunction& phi2) {
    const LatticeGrid& g = phi1.grid();
    if (g != phi2.grid()) throw std::invalid_argument("log_kernel_pairing: grids differ");
    const double L = g.box_length();
    Point center{0, 0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) center[a] = 0.5 * L;
    for (const SiteFunction* f : {static_cast<const SiteFunction*>(&phi1), static_cast<const SiteFunction*>(&phi2)}) {
        for (std::size_t i : f->support()) {
            const Point p = g.position(i);
            for (int a = 0; a < g.dim(); ++a)
                if (std::abs(g.min_image(p[a] - center[a])) > L / 4.0 + 1e-12)
                    throw std::invalid_argument(
                        "log_kernel_pairing: support leaves the central quarter of the box");
        }
    }
    const double diag = -std::log(g.spacing()) + log_cell_average_offset(g.dim());
    detail::CompensatedSum acc;
    for (std::size_t i : phi1.support()) {
        const Point yi = g.position(i);
        const double wi = phi1.values()[i];
        for (std::size_t j : phi2.support()) {
            const double k = (i == j) ? diag : -std::log(g.torus_distance(yi, g.position(j)));
            acc.add(k * wi * phi2.values()[j]);
        }
    }
    return g.cell_volume() * g.cell_volume() * acc.value();
}

/// Intersection volume of two d-balls of equal radius R at center distance r.
inline double ball_intersection_volume(int d, double R, double r) {
    if (r >= 2.0 * R) return 0.0;
    if (r <= 0.0) return unit_ball_volume(d) * std::pow(R, d);
    constexpr double pi = 3.14159265358979323846;
    switch (d) {
        case 1: return 2.0 * R - r;
        case 2: {
            const double q = 0.5 * r / R;
            return 2.0 * R * R * std::acos(q) - 0.5 * r * std::sqrt(4.0 * R * R - r * r);
        }
        case 3: return pi / 12.0 * (4.0 * R + r) * (2.0 * R - r) * (2.0 * R - r);
        default: throw std::invalid_argument("ball_intersection_volume: implemented for d <= 3");
    }
}

/// Overlap measure of two truncated solid-angle regions over height range
/// [eps, 1/eps]: integral over y of the intersection volume of balls with
/// radius y^{-1/d} whose centers are `separation` apart.  The same-center
/// value is 2 v_d log(1/eps).
inline double cone_overlap_volume(int d, double eps, double separation) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("cone_overlap_volume: need 0 < eps < 1");
    const double y_lo = eps;
    double y_hi = 1.0 / eps;
    if (separation > 0.0) {
        // balls at height y intersect only while y^{-1/d} > r/2
        const double cut = std::pow(2.0 / separation, d);
        y_hi = std::min(y_hi, cut);
        if (y_hi <= y_lo) return 0.0;
    }
    auto f = [d, separation](double y) {
        return ball_intersection_volume(d, std::pow(y, -1.0 / static_cast<double>(d)), separation);
    };
    return adaptive_simpson(f, y_lo, y_hi, 1e-10);
}

/// Continuum squared L2 norm of the annulus kernel |z|^{-d/2} on
/// eps < |z| < 1/eps: surface area times 2 log(1/eps).
inline double annulus_kernel_norm_sq(int d, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("annulus_kernel_norm_sq: need 0 < eps < 1");
    return static_cast<double>(d) * unit_ball_volume(d) * 2.0 * std::log(1.0 / eps);
}

/// Continuum self-convolution (f*f)(r e1) of the smooth compact bump of the
/// given radius in dimension d (1 or 2), by adaptive quadrature.  Even in r,
/// identically zero for |r| >= 2 radius.
inline double bump_self_convolution(int d, double r, double radius, double tol = 1e-10) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump_self_convolution: radius must be positive");
    r = std::abs(r);
    if (r >= 2.0 * radius) return 0.0;
    const double b = radius;
    if (d == 1) {
        auto f = [b, r](double w) { return bump_profile(std::abs(w), b) * bump_profile(std::abs(w + r), b); };
        return adaptive_simpson(f, -b, b - r, tol);
    }
    if (d == 2) {
        auto f = [b, r, tol](double w1) {
            const double m1 = b * b - w1 * w1;
            const double m2 = b * b - (w1 - r) * (w1 - r);
            const double m = std::sqrt(std::max(0.0, std::min(m1, m2)));
            if (m <= 0.0) return 0.0;
            auto inner = [b, r, w1](double w2) {
                return bump_profile(std::hypot(w1, w2), b) * bump_profile(std::hypot(w1 - r, w2), b);
            };
            return 2.0 * adaptive_simpson(inner, 0.0, m, tol * 0.1);
        };
        return adaptive_simpson(f, r - b, b, tol);
    }
    throw std::invalid_argument("bump_self_convolution: implemented for d in {1,2}");
}

/// Scale-mixture covariance K_t(r) = int_1^{e^t} k(u r) u^{-1} du with
/// k = bump self-convolution normalized so k(0) = 1.  K_t(0) = t, and
/// K_t vanishes for r >= 2 radius (no scale u >= 1 reaches that far).
inline double kahane_covariance(int d, double r, double t, double radius = 0.5, double tol = 1e-9) {
    if (!(t >= 0.0)) throw std::invalid_argument("kahane_covariance: need t >= 0");
    r = std::abs(r);
    double u_hi = std::exp(t);
    if (r > 0.0) u_hi = std::min(u_hi, 2.0 * radius / r);
    if (u_hi <= 1.0) return 0.0;
    const double k0 = bump_self_convolution(d, 0.0, radius);
    auto f = [d, r, radius, k0](double u) { return bump_self_convolution(d, u * r, radius) / (k0 * u); };
    return adaptive_simpson(f, 1.0, u_hi, tol);
}

}  // namespace fgf

#endif
