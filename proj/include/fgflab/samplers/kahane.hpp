#ifndef FGFLAB_SAMPLERS_KAHANE_HPP
#define FGFLAB_SAMPLERS_KAHANE_HPP

// Scale-decomposition (Kahane) construction: X_t integrates white noise on
// R^d x [1, e^t] (flat intensity in log-scale) against a smooth bump whose
// center tracks u x, giving the stationary covariance
// K_t(x - x') = int_1^{e^t} k(u (x - x')) u^{-1} du, k = normalized bump
// self-convolution.  Discretization slices the scale axis into geometric
// slabs; the slab at scale u is an independent white-noise layer convolved
// with the dilated bump f(u z) (radius shrinks like 1/u, so only the base
// bump must fit the torus), normalized by the DISCRETE kernel norm so each
// slab contributes exactly log(u1/u0) to the site variance.  The total site
// variance is therefore exactly t on any resolvable grid.
//
// As with the cone ladder, the slab sum is a single spectral-multiplier
// field: the per-mode density D(n) is assembled once and each draw is one
// Hermitian noise fill scaled by sqrt(D) plus one inverse transform.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/rng.hpp"
#include "../core/spectrum.hpp"
#include "../core/test_functions.hpp"
#include "cone.hpp"
#include "spectral.hpp"

namespace fgf {

struct KahaneConfig {
    LatticeGrid grid;
    double t;
    std::uint64_t seed = 0;
    int slabs_per_efold = 8;
    double bump_radius = 0.5;

    void validate() const {
        if (!(t >= 0.0)) throw std::invalid_argument("KahaneConfig: need t >= 0");
        if (slabs_per_efold < 1) throw std::invalid_argument("KahaneConfig: need at least one slab per e-fold");
        if (!(bump_radius > 0.0)) throw std::invalid_argument("KahaneConfig: bump radius must be positive");
        if (bump_radius > grid.box_length() / 4.0)
            throw std::invalid_argument("KahaneConfig: bump radius exceeds a quarter of the box");
        if (bump_radius * std::exp(-t) < grid.spacing())
            throw std::invalid_argument("KahaneConfig: finest kernel radius " +
                                        std::to_string(bump_radius * std::exp(-t)) +
                                        " falls below the lattice spacing; reduce t or refine the grid");
    }
};

namespace detail {

/// Accumulate one scale slab [u0, u1] into the mode density.  The slab
/// kernel is c * f(u z) with u the geometric midpoint and
/// c^2 = log(u1/u0) / (dx^d sum f(u z)^2), so its variance contribution is
/// exactly log(u1/u0) however coarsely the lattice resolves the bump.
inline void add_scaled_bump_density(const LatticeGrid& grid, double u0, double u1, double bump_radius,
                                    std::vector<double>& density) {
    const int d = grid.dim();
    const double logratio = std::log(u1 / u0);
    const double radius = bump_radius / std::sqrt(u0 * u1);

    std::vector<double> f(grid.site_count(), 0.0);
    const Point origin{0.0, 0.0, 0.0, 0.0};
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = grid.torus_distance(grid.position(i), origin);
        if (r < radius) {
            f[i] = bump_profile(r, radius);
            norm_sq += f[i] * f[i];
        }
    }
    // norm_sq >= 1 always: the origin site evaluates the profile at r = 0
    const double weight = std::pow(2.0 * 3.14159265358979323846, d) / mode_volume(grid) * logratio /
                          (grid.cell_volume() * norm_sq);
    const SpectralArray fhat = dft_forward(grid, f);
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += weight * std::norm(fhat.coeff[i]);
}

/// Mode density of the scale ladder over u in [u_lo, u_hi].
inline std::vector<double> kahane_mode_density(const LatticeGrid& grid, double u_lo, double u_hi, int per_efold,
                                               double bump_radius) {
    std::vector<double> density(grid.site_count(), 0.0);
    const std::vector<double> edges = geometric_edges(u_lo, u_hi, per_efold);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        add_scaled_bump_density(grid, edges[j], edges[j + 1], bump_radius, density);
    return density;
}

}  // namespace detail

/// Sampler for the truncated scale-decomposition field X_t.  Stationary,
/// NOT modulo-constant; Var[X_t] = t exactly in the sampled law.
class KahaneSampler {
  public:
    explicit KahaneSampler(const KahaneConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        if (cfg_.t > 0.0)
            density_ = detail::kahane_mode_density(cfg_.grid, 1.0, std::exp(cfg_.t), cfg_.slabs_per_efold,
                                                   cfg_.bump_radius);
        else
            density_.assign(cfg_.grid.site_count(), 0.0);
        sqrt_density_ = density_;
        for (double& v : sqrt_density_) v = std::sqrt(v);
    }

    const KahaneConfig& config() const { return cfg_; }

    /// Exact per-mode density E|hhat(n)|^2 of the law being sampled.
    const std::vector<double>& mode_density() const { return density_; }

    /// Exact covariance function Cov[h(x), h(0)] of the discretized law.
    std::vector<double> covariance_function() const { return covariance_from_mode_density(cfg_.grid, density_); }

    LatticeField sample(std::uint64_t stream = 0) const {
        const SeededRng rng(cfg_.seed, stream);
        LatticeField f = detail::sample_from_sqrt_density(cfg_.grid, sqrt_density_, rng);
        f.modulo_constant = false;
        f.construction = "kahane";
        f.seed = cfg_.seed;
        f.params = {{"t", cfg_.t}, {"bump_radius", cfg_.bump_radius}};
        return f;
    }

  private:
    KahaneConfig cfg_;
    std::vector<double> density_;
    std::vector<double> sqrt_density_;
};

inline LatticeField sample_kahane(const KahaneConfig& cfg, std::uint64_t stream = 0) {
    return KahaneSampler(cfg).sample(stream);
}

/// Coupled fields X_{t_0}, X_{t_1}, ... for strictly increasing positive
/// times.  Band k integrates scales [e^{t_{k-1}}, e^{t_k}] with its own
/// independent noise layer, so each increment X_{t_{k+1}} - X_{t_k} is
/// independent of X_{t_k} and the variances add exactly: Var[X_t] = t.
inline std::vector<LatticeField> sample_kahane_family(const LatticeGrid& grid, const std::vector<double>& times,
                                                      std::uint64_t seed, std::uint64_t stream = 0,
                                                      int slabs_per_efold = 8, double bump_radius = 0.5) {
    if (times.empty()) throw std::invalid_argument("sample_kahane_family: need at least one time");
    if (!(times.front() > 0.0)) throw std::invalid_argument("sample_kahane_family: times must be positive");
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (!(times[k] < times[k + 1]))
            throw std::invalid_argument("sample_kahane_family: times must be strictly increasing");
    KahaneConfig deepest{grid, times.back(), seed, slabs_per_efold, bump_radius};
    deepest.validate();

    const SeededRng base(seed, stream);
    std::vector<LatticeField> out;
    out.reserve(times.size());
    LatticeField running(grid);
    double t_prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> density = detail::kahane_mode_density(grid, std::exp(t_prev), std::exp(times[k]),
                                                                  slabs_per_efold, bump_radius);
        for (double& v : density) v = std::sqrt(v);
        const SeededRng band_rng = base.derive(0x6b61686eu + k);  // per-band independent noise
        const LatticeField inc = detail::sample_from_sqrt_density(grid, density, band_rng);
        for (std::size_t i = 0; i < running.values.size(); ++i) running.values[i] += inc.values[i];
        t_prev = times[k];

        LatticeField f = running;
        f.modulo_constant = false;
        f.construction = "kahane";
        f.seed = seed;
        f.params = {{"t", times[k]}, {"bump_radius", bump_radius}};
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace fgf

#endif
