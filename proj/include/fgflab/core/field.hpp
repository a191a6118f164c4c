#ifndef FGFLAB_CORE_FIELD_HPP
#define FGFLAB_CORE_FIELD_HPP

// Lattice fields and test functions, plus the pairing between them.
//
// A field sampled from a decay exponent s > 0 is only defined modulo an
// additive constant; such fields carry modulo_constant = true, store the
// zero-site-mean representative, and may only be paired against mean-zero
// test functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace fgf {

/// Spectral decay exponent s of the sampling multiplier |k|^{-s}.
struct SpectralExponent {
    double s = 0.0;
    /// Scaling exponent H = s - d/2 of the dilation law.
    double hurst(int dim) const { return s - 0.5 * static_cast<double>(dim); }
    /// True when s = d/2, the log-correlated point of the family.
    bool log_correlated(int dim) const { return s == 0.5 * static_cast<double>(dim); }
};

namespace detail {

// Neumaier compensated sum; deterministic for a fixed traversal order.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace detail

struct LatticeField {
    LatticeGrid grid;
    std::vector<double> values;
    bool modulo_constant = false;
    std::string construction = "raw";
    std::uint64_t seed = 0;
    std::optional<double> exponent;  // decay exponent s, when the construction has one
    std::vector<std::pair<std::string, double>> params;  // construction knobs (epsilon, t, T, ...)

    LatticeField(LatticeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.site_count())
            throw std::invalid_argument("LatticeField: value count does not match grid");
    }
    explicit LatticeField(LatticeGrid g) : grid(g), values(g.site_count(), 0.0) {}

    double site_mean() const {
        detail::CompensatedSum s;
        for (double v : values) s.add(v);
        return s.value() / static_cast<double>(values.size());
    }

    /// Subtract the site mean in place (twice, so the residual is ~eps^2).
    void remove_site_mean() {
        for (int pass = 0; pass < 2; ++pass) {
            const double m = site_mean();
            for (double& v : values) v -= m;
        }
    }
};

/// Lattice function used as a pairing weight.  Tracks its support so pairings
/// and kernel sums only touch nonzero sites.
class SiteFunction {
  public:
    SiteFunction(LatticeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.site_count())
            throw std::invalid_argument("SiteFunction: value count does not match grid");
        detail::CompensatedSum sum, abs_sum;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] != 0.0) {
                support_.push_back(i);
                sum.add(values_[i]);
                abs_sum.add(std::abs(values_[i]));
            }
        }
        site_sum_ = sum.value();
        site_abs_sum_ = abs_sum.value();
    }

    const LatticeGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::span<const std::size_t> support() const { return support_; }
    double site_sum() const { return site_sum_; }

    /// Zero-mean test: |sum phi| <= 1e-12 * sum |phi|.
    bool mean_zero() const { return std::abs(site_sum_) <= 1e-12 * site_abs_sum_; }

    /// Discrete L2 norm squared, dx^d sum phi^2.
    double l2_norm_sq() const {
        detail::CompensatedSum s;
        for (std::size_t i : support_) s.add(values_[i] * values_[i]);
        return grid_.cell_volume() * s.value();
    }

    /// Largest minimum-image distance from `p` to a support site.
    double max_support_distance(const Point& p) const {
        double r = 0.0;
        for (std::size_t i : support_) r = std::max(r, grid_.torus_distance(grid_.position(i), p));
        return r;
    }

  private:
    LatticeGrid grid_;
    std::vector<double> values_;
    std::vector<std::size_t> support_;
    double site_sum_ = 0.0;
    double site_abs_sum_ = 0.0;
};

/// Mean-zero site function; the only admissible pairing weight for fields
/// defined modulo a constant.
class TestFunction : public SiteFunction {
  public:
    TestFunction(LatticeGrid grid, std::vector<double> values) : SiteFunction(grid, std::move(values)) {
        if (!mean_zero())
            throw std::invalid_argument("TestFunction: values do not sum to zero (relative residual above 1e-12)");
    }
    explicit TestFunction(SiteFunction f) : SiteFunction(std::move(f)) {
        if (!mean_zero())
            throw std::invalid_argument("TestFunction: values do not sum to zero (relative residual above 1e-12)");
    }
};

/// Discrete pairing (h, phi) = dx^d sum_x h(x) phi(x).
inline double pair(const LatticeField& h, const SiteFunction& phi) {
    if (h.grid != phi.grid()) throw std::invalid_argument("pair: field and weight live on different grids");
    if (h.modulo_constant && !phi.mean_zero())
        throw std::invalid_argument(
            "pair: field is defined modulo an additive constant; pairing weight must have zero mean");
    detail::CompensatedSum s;
    for (std::size_t i : phi.support()) s.add(h.values[i] * phi.values()[i]);
    return h.grid.cell_volume() * s.value();
}

/// Discrete L2 inner product dx^d sum f g.
inline double l2_inner(const SiteFunction& f, const SiteFunction& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("l2_inner: grids differ");
    detail::CompensatedSum s;
    for (std::size_t i : f.support()) s.add(f.values()[i] * g.values()[i]);
    return f.grid().cell_volume() * s.value();
}

/// Orthogonal projection onto mean-zero functions: subtract the site mean.
inline TestFunction project_mean_zero(const LatticeGrid& grid, std::vector<double> values) {
    if (values.size() != grid.site_count())
        throw std::invalid_argument("project_mean_zero: value count does not match grid");
    for (int pass = 0; pass < 2; ++pass) {
        detail::CompensatedSum s;
        for (double v : values) s.add(v);
        const double m = s.value() / static_cast<double>(values.size());
        for (double& v : values) v -= m;
    }
    return TestFunction(grid, std::move(values));
}

}  // namespace fgf

#endif
