#ifndef FGFLAB_SAMPLERS_SPECTRAL_HPP
#define FGFLAB_SAMPLERS_SPECTRAL_HPP

// Sampling in the Fourier domain: white noise, and the fractional family
// obtained by multiplying a white-noise spectrum by |k|^{-s}.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/rng.hpp"
#include "../core/spectrum.hpp"

namespace fgf {

/// Hermitian complex noise with E|w(n)|^2 = 1 per mode and w(-n) = conj w(n),
/// so its inverse transform is real.  Self-conjugate modes (all components
/// 0 or N/2) are real N(0,1); every other conjugate pair shares one counter,
/// so the array is identical however mode order is traversed.
inline SpectralArray sample_hermitian_unit_noise(const LatticeGrid& grid, const SeededRng& rng) {
    SpectralArray w(grid);
    const double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t i = 0; i < w.coeff.size(); ++i) {
        const std::size_t j = conjugate_mode(grid, i);
        if (j == i) {
            w.coeff[i] = {rng.gaussian(i), 0.0};
        } else if (i < j) {
            double g0, g1;
            rng.gaussian_pair(i, g0, g1);
            w.coeff[i] = {g0 * inv_sqrt2, g1 * inv_sqrt2};
            w.coeff[j] = std::conj(w.coeff[i]);
        }
    }
    return w;
}

/// Site-wise i.i.d. Gaussians with variance dx^{-d}, the lattice white noise
/// whose pairings reproduce the L2 inner product: Var[pair(W,rho)] = (rho,rho).
inline LatticeField sample_white_noise(const LatticeGrid& grid, std::uint64_t seed, std::uint64_t stream = 0) {
    const SeededRng rng(seed, stream);
    LatticeField f(grid);
    const double sd = 1.0 / std::sqrt(grid.cell_volume());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = sd * rng.gaussian(i);
    f.modulo_constant = false;
    f.construction = "white-noise";
    f.seed = seed;
    f.exponent = 0.0;
    return f;
}

struct SpectralSamplerConfig {
    LatticeGrid grid;
    SpectralExponent exponent;
    std::uint64_t seed = 0;
};

/// Fractional-family sampler: hhat(k) = |k|^{-s} what(k) for k != 0, zero
/// mode excluded, returned in the site domain.  Precomputes the spectral
/// multiplier once; sample(stream) is then one noise fill and one inverse
/// transform.  In law, Var[pair(h,phi)] equals the weighted spectral sum
/// sum_{k != 0} |k|^{-2s} |phihat(k)|^2 dk^d exactly.
class SpectralSampler {
  public:
    explicit SpectralSampler(const SpectralSamplerConfig& cfg) : cfg_(cfg) {
        if (cfg_.exponent.s < 0.0)
            throw std::invalid_argument("SpectralSampler: negative decay exponent is not supported");
        if (cfg_.exponent.s > 0.0) {
            mult_.resize(cfg_.grid.site_count(), 0.0);
            const double amp = 1.0 / std::sqrt(mode_volume(cfg_.grid));
            for (std::size_t i = 1; i < mult_.size(); ++i) {
                const double k2 = wavenumber_sq(cfg_.grid, i);
                mult_[i] = amp * std::pow(k2, -0.5 * cfg_.exponent.s);
            }
        }
    }

    const SpectralSamplerConfig& config() const { return cfg_; }

    LatticeField sample(std::uint64_t stream = 0) const {
        if (cfg_.exponent.s == 0.0) {
            // |k|^0 = 1: the family degenerates to plain white noise, zero
            // mode included, not modulo-constant.
            LatticeField f = sample_white_noise(cfg_.grid, cfg_.seed, stream);
            f.construction = "spectral";
            return f;
        }
        const SeededRng rng(cfg_.seed, stream);
        SpectralArray h = sample_hermitian_unit_noise(cfg_.grid, rng);
        for (std::size_t i = 0; i < h.coeff.size(); ++i) h.coeff[i] *= mult_[i];
        LatticeField f = dft_inverse_real(h);
        f.remove_site_mean();  // zero mode is absent; scrub rounding residue
        f.modulo_constant = true;
        f.construction = cfg_.exponent.log_correlated(cfg_.grid.dim()) ? "spectral:lgf" : "spectral";
        f.seed = cfg_.seed;
        f.exponent = cfg_.exponent.s;
        return f;
    }

  private:
    SpectralSamplerConfig cfg_;
    std::vector<double> mult_;
};

inline LatticeField sample_fgf(const SpectralSamplerConfig& cfg, std::uint64_t stream = 0) {
    return SpectralSampler(cfg).sample(stream);
}

/// Spectral multiplication by |k|^{2a} with the zero mode pinned at 0.
/// For a < 0 the input must already exclude the zero mode (modulo-constant),
/// otherwise constant mass would be silently destroyed.
inline LatticeField apply_fractional_laplacian(const LatticeField& h, double a) {
    if (a < 0.0 && !h.modulo_constant)
        throw std::invalid_argument(
            "apply_fractional_laplacian: negative power needs a modulo-constant input (no zero mode)");
    SpectralArray sp = dft_forward(h);
    sp.coeff[0] = {0.0, 0.0};
    for (std::size_t i = 1; i < sp.coeff.size(); ++i) {
        const double k2 = wavenumber_sq(sp.grid, i);
        sp.coeff[i] *= std::pow(k2, a);
    }
    LatticeField out = dft_inverse_real(sp);
    out.remove_site_mean();
    out.modulo_constant = h.modulo_constant;
    out.construction = h.construction;
    out.seed = h.seed;
    return out;
}

}  // namespace fgf

#endif
