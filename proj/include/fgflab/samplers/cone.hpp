#ifndef FGFLAB_SAMPLERS_CONE_HPP
#define FGFLAB_SAMPLERS_CONE_HPP

// Cone construction: white noise on R^d x [eps, 1/eps] (flat intensity in
// the height variable y) integrated over the cone section
// {z : |z - a| <= y^{-1/d}}.  Discretization slices the y-axis into
// geometric slabs; each slab convolves an independent white-noise layer
// with a ball indicator whose radius is the log-mean of y^{-1/d} over the
// slab, normalized so the slab contributes exactly v_d * log(y1/y0) to the
// site variance.  The total site variance is therefore exactly
// 2 * v_d * log(1/eps), matching the Lebesgue measure of the truncated cone.
//
// A sum of independent stationary convolutions is itself a spectral
// multiplier field, so the slab ladder is assembled once into a per-mode
// density D(n); each draw is then a single Hermitian noise fill scaled by
// sqrt(D) plus one inverse transform, with the exact joint law of the slab
// sum across all lattice sites.

#include <cmath>
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

struct ConeConfig {
    LatticeGrid grid;
    double epsilon;
    std::uint64_t seed = 0;
    int slabs_per_efold = 8;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("ConeConfig: need 0 < epsilon < 1");
        if (slabs_per_efold < 1) throw std::invalid_argument("ConeConfig: need at least one slab per e-fold");
        const double r_max = std::pow(epsilon, -1.0 / static_cast<double>(grid.dim()));
        if (r_max > grid.box_length() / 4.0)
            throw std::invalid_argument("ConeConfig: widest cone cross-section (radius " + std::to_string(r_max) +
                                        ") exceeds a quarter of the box");
    }
};

namespace detail {

/// Geometric subdivision of [lo, hi] with roughly per_efold points per
/// factor of e; endpoints are exact.
inline std::vector<double> geometric_edges(double lo, double hi, int per_efold) {
    if (!(hi > lo && lo > 0.0)) throw std::invalid_argument("geometric_edges: need 0 < lo < hi");
    const double span = std::log(hi / lo);
    const int m = std::max(1, static_cast<int>(std::ceil(per_efold * span)));
    std::vector<double> edges(m + 1);
    edges[0] = lo;
    edges[m] = hi;
    for (int i = 1; i < m; ++i) edges[i] = lo * std::exp(span * i / m);
    return edges;
}

/// Accumulate one slab [y0, y1] of the cone ladder into the mode density.
/// The slab kernel is s * chi_r with r^d = log(y1/y0)/(y1-y0) (log-mean of
/// y^{-1} over the slab) and s^2 = v_d log(y1/y0) / ((y1-y0) dx^d sum chi),
/// so its exact variance contribution is v_d log(y1/y0) however coarsely
/// the lattice resolves the ball.
inline void add_cone_slab_density(const LatticeGrid& grid, double y0, double y1, std::vector<double>& density) {
    const int d = grid.dim();
    const double logratio = std::log(y1 / y0);
    const double dy = y1 - y0;
    const double radius = std::pow(logratio / dy, 1.0 / static_cast<double>(d));

    std::vector<double> chi(grid.site_count(), 0.0);
    const Point origin{0.0, 0.0, 0.0, 0.0};
    double count = 0.0;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        if (grid.torus_distance(grid.position(i), origin) <= radius) {
            chi[i] = 1.0;
            count += 1.0;
        }
    }
    // count >= 1 always (the origin site), so the normalization is finite
    const double weight = std::pow(2.0 * 3.14159265358979323846, d) / mode_volume(grid) * unit_ball_volume(d) *
                          logratio / (grid.cell_volume() * count);
    const SpectralArray chat = dft_forward(grid, chi);
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += weight * std::norm(chat.coeff[i]);
}

/// Mode density of the cone ladder over heights [y_lo, y_hi].
inline std::vector<double> cone_mode_density(const LatticeGrid& grid, double y_lo, double y_hi, int per_efold) {
    std::vector<double> density(grid.site_count(), 0.0);
    const std::vector<double> edges = geometric_edges(y_lo, y_hi, per_efold);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) add_cone_slab_density(grid, edges[j], edges[j + 1], density);
    return density;
}

inline LatticeField sample_from_sqrt_density(const LatticeGrid& grid, const std::vector<double>& sqrt_density,
                                             const SeededRng& rng) {
    SpectralArray h = sample_hermitian_unit_noise(grid, rng);
    for (std::size_t i = 0; i < h.coeff.size(); ++i) h.coeff[i] *= sqrt_density[i];
    return dft_inverse_real(h);
}

}  // namespace detail

/// Sampler for the truncated cone field.  Stationary, NOT modulo-constant:
/// the zero mode carries genuine variance.  Precomputes sqrt(D) once.
class ConeSampler {
  public:
    explicit ConeSampler(const ConeConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        density_ = detail::cone_mode_density(cfg_.grid, cfg_.epsilon, 1.0 / cfg_.epsilon, cfg_.slabs_per_efold);
        sqrt_density_ = density_;
        for (double& v : sqrt_density_) v = std::sqrt(v);
    }

    const ConeConfig& config() const { return cfg_; }

    /// Exact per-mode density E|hhat(n)|^2 of the law being sampled.
    const std::vector<double>& mode_density() const { return density_; }

    /// Exact covariance function Cov[h(x), h(0)] of the discretized law.
    std::vector<double> covariance_function() const { return covariance_from_mode_density(cfg_.grid, density_); }

    LatticeField sample(std::uint64_t stream = 0) const {
        const SeededRng rng(cfg_.seed, stream);
        LatticeField f = detail::sample_from_sqrt_density(cfg_.grid, sqrt_density_, rng);
        f.modulo_constant = false;
        f.construction = "cone";
        f.seed = cfg_.seed;
        f.params = {{"epsilon", cfg_.epsilon}};
        return f;
    }

  private:
    ConeConfig cfg_;
    std::vector<double> density_;
    std::vector<double> sqrt_density_;
};

inline LatticeField sample_cone(const ConeConfig& cfg, std::uint64_t stream = 0) {
    return ConeSampler(cfg).sample(stream);
}

/// Coupled cone fields for a decreasing cutoff ladder eps[0] > eps[1] > ...
/// Field k integrates heights [eps[k], 1/eps[k]]; successive fields share
/// all inner slabs and add independently sampled outer bands, so the
/// increment field[k+1] - field[k] is independent of field[k] by
/// construction.  Band ladders are built per band, so the law of field[k]
/// for k >= 1 differs from the standalone sampler only in slab edges.
inline std::vector<LatticeField> sample_cone_family(const LatticeGrid& grid, const std::vector<double>& epsilons,
                                                    std::uint64_t seed, std::uint64_t stream = 0,
                                                    int slabs_per_efold = 8) {
    if (epsilons.empty()) throw std::invalid_argument("sample_cone_family: need at least one cutoff");
    for (std::size_t k = 0; k + 1 < epsilons.size(); ++k)
        if (!(epsilons[k] > epsilons[k + 1]))
            throw std::invalid_argument("sample_cone_family: cutoffs must be strictly decreasing");
    ConeConfig finest{grid, epsilons.back(), seed, slabs_per_efold};
    finest.validate();

    const SeededRng base(seed, stream);
    std::vector<LatticeField> out;
    out.reserve(epsilons.size());
    LatticeField running(grid);
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        // band k adds [eps_k, eps_{k-1}] and [1/eps_{k-1}, 1/eps_k]
        std::vector<double> density(grid.site_count(), 0.0);
        if (k == 0) {
            density = detail::cone_mode_density(grid, epsilons[0], 1.0 / epsilons[0], slabs_per_efold);
        } else {
            const std::vector<double> lower =
                detail::cone_mode_density(grid, epsilons[k], epsilons[k - 1], slabs_per_efold);
            const std::vector<double> upper =
                detail::cone_mode_density(grid, 1.0 / epsilons[k - 1], 1.0 / epsilons[k], slabs_per_efold);
            for (std::size_t i = 0; i < density.size(); ++i) density[i] = lower[i] + upper[i];
        }
        for (double& v : density) v = std::sqrt(v);
        const SeededRng band_rng = base.derive(0x636f6e65u + k);  // per-band independent noise
        const LatticeField inc = detail::sample_from_sqrt_density(grid, density, band_rng);
        for (std::size_t i = 0; i < running.values.size(); ++i) running.values[i] += inc.values[i];

        LatticeField f = running;
        f.modulo_constant = false;
        f.construction = "cone";
        f.seed = seed;
        f.params = {{"epsilon", epsilons[k]}};
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace fgf

#endif
