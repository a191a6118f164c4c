#ifndef FGFLAB_SAMPLERS_VOLATILITY_HPP
#define FGFLAB_SAMPLERS_VOLATILITY_HPP

// Volatility-style construction in d = 1: a stationary Gaussian field with
// the truncated logarithm covariance Cov[h(x), h(x')] = log+(T / |x - x'|),
// sampled by circulant embedding.  The covariance row is exact: off-diagonal
// entries are the pointwise kernel at minimum-image distances (identically
// zero beyond T), and the diagonal is the cell average of log+(T/|r|) over
// one lattice cell, log(2T/dx) + 1, which matches the regularization used
// by the -log kernel quadrature.  The circulant eigenvalues are the DFT of
// the row; tiny negative values from rounding are clipped to zero, and any
// eigenvalue below -1e-10 times the largest is a hard error (the requested
// covariance is not realizable on this grid).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/rng.hpp"
#include "../core/spectrum.hpp"
#include "cone.hpp"
#include "spectral.hpp"

namespace fgf {

struct VolatilityConfig {
    LatticeGrid grid;
    double T;
    std::uint64_t seed = 0;

    void validate() const {
        if (grid.dim() != 1) throw std::invalid_argument("VolatilityConfig: circulant embedding is d = 1 only");
        if (!(T > 0.0)) throw std::invalid_argument("VolatilityConfig: need T > 0");
        if (T > grid.box_length() / 4.0)
            throw std::invalid_argument("VolatilityConfig: correlation range T exceeds a quarter of the box");
        if (T < 0.5 * grid.spacing())
            throw std::invalid_argument("VolatilityConfig: T below half a lattice cell is unresolvable");
    }
};

/// Target covariance row c_m = Cov[h(x_m), h(0)]: pointwise truncated log at
/// minimum-image distances, cell-averaged on the diagonal.
inline std::vector<double> volatility_covariance_row(const LatticeGrid& grid, double T) {
    std::vector<double> row(grid.site_count(), 0.0);
    row[0] = std::log(2.0 * T / grid.spacing()) + 1.0;
    const Point origin{0.0, 0.0, 0.0, 0.0};
    for (std::size_t m = 1; m < row.size(); ++m) {
        const double r = grid.torus_distance(grid.position(m), origin);
        if (r < T) row[m] = std::log(T / r);
    }
    return row;
}

/// Sampler for the truncated-log field.  Stationary, NOT modulo-constant.
class VolatilitySampler {
  public:
    explicit VolatilitySampler(const VolatilityConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        row_ = volatility_covariance_row(cfg_.grid, cfg_.T);
        // circulant eigenvalues lambda_n = sum_m c_m e^{-2 pi i n m / N}
        const SpectralArray chat = dft_forward(cfg_.grid, row_);
        const double to_eigen = std::sqrt(2.0 * 3.14159265358979323846) / cfg_.grid.spacing();
        std::vector<double> eigen(row_.size());
        for (std::size_t i = 0; i < eigen.size(); ++i) eigen[i] = to_eigen * chat.coeff[i].real();
        const double top = *std::max_element(eigen.begin(), eigen.end());
        const double bottom = *std::min_element(eigen.begin(), eigen.end());
        if (bottom < -1e-10 * top)
            throw std::runtime_error("VolatilitySampler: covariance spectrum has eigenvalue " +
                                     std::to_string(bottom) + " below tolerance -1e-10 * " + std::to_string(top));
        // D(n) = lambda_n L^2 / (2 pi N) reproduces the row through the
        // inverse transform; rounding-level negatives are clipped to zero
        const double to_density = cfg_.grid.box_length() * cfg_.grid.box_length() /
                                  (2.0 * 3.14159265358979323846 * static_cast<double>(eigen.size()));
        density_.resize(eigen.size());
        for (std::size_t i = 0; i < eigen.size(); ++i) density_[i] = std::max(0.0, to_density * eigen[i]);
        sqrt_density_ = density_;
        for (double& v : sqrt_density_) v = std::sqrt(v);
    }

    const VolatilityConfig& config() const { return cfg_; }

    /// The requested covariance row (exact target of the embedding).
    const std::vector<double>& covariance_row() const { return row_; }

    /// Exact per-mode density E|hhat(n)|^2 of the law being sampled.
    const std::vector<double>& mode_density() const { return density_; }

    /// Exact covariance function of the sampled law; equals covariance_row()
    /// up to the clipped rounding-level eigenvalues.
    std::vector<double> covariance_function() const { return covariance_from_mode_density(cfg_.grid, density_); }

    LatticeField sample(std::uint64_t stream = 0) const {
        const SeededRng rng(cfg_.seed, stream);
        LatticeField f = detail::sample_from_sqrt_density(cfg_.grid, sqrt_density_, rng);
        f.modulo_constant = false;
        f.construction = "volatility";
        f.seed = cfg_.seed;
        f.params = {{"T", cfg_.T}};
        return f;
    }

  private:
    VolatilityConfig cfg_;
    std::vector<double> row_;
    std::vector<double> density_;
    std::vector<double> sqrt_density_;
};

inline LatticeField sample_volatility(const VolatilityConfig& cfg, std::uint64_t stream = 0) {
    return VolatilitySampler(cfg).sample(stream);
}

}  // namespace fgf

#endif
