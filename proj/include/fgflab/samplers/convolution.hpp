#ifndef FGFLAB_SAMPLERS_CONVOLUTION_HPP
#define FGFLAB_SAMPLERS_CONVOLUTION_HPP

// Annulus-kernel convolution: white noise convolved with
// psi_eps(z) = |z|^{-d/2} restricted to eps < |z| < 1/eps, realized as a
// spectral multiplier on the periodic lattice (the kernel is periodized by
// the minimum-image convention).  The site variance of the discretized law
// is exactly dx^d sum_z psi(z)^2, the lattice quadrature of the continuum
// integral d * v_d * 2 log(1/eps).
//
// Different cutoffs built on the same (seed, stream) share the Hermitian
// noise, so a cutoff ladder is coupled: the increment field between two
// cutoffs is the convolution with the annular difference kernel.  The
// difference kernel is radially disjoint from the inner kernel, which makes
// coarse field and increment uncorrelated at every single site, though not
// independent as fields (the cross-covariance at distinct sites is the
// kernel cross-correlation, which does not vanish).

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/rng.hpp"
#include "../core/spectrum.hpp"
#include "spectral.hpp"

namespace fgf {

struct ConvolutionConfig {
    LatticeGrid grid;
    double epsilon;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("ConvolutionConfig: need 0 < epsilon < 1");
        if (1.0 / epsilon > grid.box_length() / 4.0)
            throw std::invalid_argument("ConvolutionConfig: kernel outer radius " + std::to_string(1.0 / epsilon) +
                                        " exceeds a quarter of the box");
    }
};

/// The annulus kernel |z|^{-d/2} 1_{eps<|z|<1/eps} sampled at minimum-image
/// site positions (site 0 at the origin).
inline std::vector<double> annulus_kernel_values(const LatticeGrid& grid, double epsilon) {
    std::vector<double> psi(grid.site_count(), 0.0);
    const Point origin{0.0, 0.0, 0.0, 0.0};
    const double d = static_cast<double>(grid.dim());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double r = grid.torus_distance(grid.position(i), origin);
        if (r > epsilon && r < 1.0 / epsilon) psi[i] = std::pow(r, -0.5 * d);
    }
    return psi;
}

/// Exact site variance of the discretized convolution field: dx^d sum psi^2.
inline double convolution_site_variance(const LatticeGrid& grid, double epsilon) {
    const std::vector<double> psi = annulus_kernel_values(grid, epsilon);
    detail::CompensatedSum s;
    for (double v : psi) s.add(v * v);
    return grid.cell_volume() * s.value();
}

/// Sampler for the annulus-convolution field.  Stationary, NOT
/// modulo-constant.  hhat(n) = (2pi)^{d/2} psihat(n) dk^{-d/2} xi(n) with xi
/// unit Hermitian noise, the spectral form of dx^d sum_z psi(x-z) w(z).
class ConvolutionSampler {
  public:
    explicit ConvolutionSampler(const ConvolutionConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        const std::vector<double> psi = annulus_kernel_values(cfg_.grid, cfg_.epsilon);
        const SpectralArray psihat = dft_forward(cfg_.grid, psi);
        const int d = cfg_.grid.dim();
        const double amp = std::pow(2.0 * 3.14159265358979323846, 0.5 * d) / std::sqrt(mode_volume(cfg_.grid));
        mult_.resize(psihat.coeff.size());
        for (std::size_t i = 0; i < mult_.size(); ++i) mult_[i] = amp * psihat.coeff[i];
    }

    const ConvolutionConfig& config() const { return cfg_; }

    /// Exact per-mode density E|hhat(n)|^2 of the law being sampled.
    std::vector<double> mode_density() const {
        std::vector<double> density(mult_.size());
        for (std::size_t i = 0; i < mult_.size(); ++i) density[i] = std::norm(mult_[i]);
        return density;
    }

    /// Exact covariance function Cov[h(x), h(0)] of the discretized law.
    std::vector<double> covariance_function() const { return covariance_from_mode_density(cfg_.grid, mode_density()); }

    LatticeField sample(std::uint64_t stream = 0) const {
        const SeededRng rng(cfg_.seed, stream);
        SpectralArray h = sample_hermitian_unit_noise(cfg_.grid, rng);
        for (std::size_t i = 0; i < h.coeff.size(); ++i) h.coeff[i] *= mult_[i];
        LatticeField f = dft_inverse_real(h);
        f.modulo_constant = false;
        f.construction = "conv";
        f.seed = cfg_.seed;
        f.params = {{"epsilon", cfg_.epsilon}};
        return f;
    }

  private:
    ConvolutionConfig cfg_;
    std::vector<std::complex<double>> mult_;
};

inline LatticeField sample_convolution(const ConvolutionConfig& cfg, std::uint64_t stream = 0) {
    return ConvolutionSampler(cfg).sample(stream);
}

/// Coupled convolution fields for a decreasing cutoff ladder built on one
/// shared Hermitian noise draw.  field[k] is the convolution of the SAME
/// white noise with psi_{eps[k]}, so field[k+1] - field[k] convolves the
/// annular difference kernel and is pointwise uncorrelated with field[k].
inline std::vector<LatticeField> sample_convolution_family(const LatticeGrid& grid,
                                                           const std::vector<double>& epsilons, std::uint64_t seed,
                                                           std::uint64_t stream = 0) {
    if (epsilons.empty()) throw std::invalid_argument("sample_convolution_family: need at least one cutoff");
    for (std::size_t k = 0; k + 1 < epsilons.size(); ++k)
        if (!(epsilons[k] > epsilons[k + 1]))
            throw std::invalid_argument("sample_convolution_family: cutoffs must be strictly decreasing");
    std::vector<LatticeField> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) out.push_back(sample_convolution(ConvolutionConfig{grid, eps, seed}, stream));
    return out;
}

}  // namespace fgf

#endif
