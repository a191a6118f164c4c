#ifndef FGFLAB_SAMPLERS_CONFIG_HPP
#define FGFLAB_SAMPLERS_CONFIG_HPP

// One-stop sampler dispatch: a flat parameter set naming a construction,
// resolved to a stream -> field closure.  Used by the command-line driver
// and by cross-backend comparisons, so every backend is reachable through
// the same knobs.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "cascade.hpp"
#include "cone.hpp"
#include "convolution.hpp"
#include "kahane.hpp"
#include "spectral.hpp"
#include "volatility.hpp"

namespace fgf {

/// Flat construction choice; fields irrelevant to the chosen construction
/// are ignored.  `exponent` defaults to the log-correlated point d/2.
struct SamplerChoice {
    std::string construction = "spectral";
    LatticeGrid grid;
    std::uint64_t seed = 0;

    std::optional<double> exponent;          // spectral
    double epsilon = 0.05;                   // cone, conv
    double t = 1.0;                          // kahane
    double corr_range = 1.0;                 // volatility window T
    int level_min = 0, level_max = 6;        // cascade
    double alpha = 1.0;                      // cascade level weight
    CubeOrigin origin = CubeOrigin::corner;  // cascade cube alignment
    int slabs_per_efold = 8;                 // cone, kahane discretization
    double bump_radius = 0.5;                // kahane kernel radius
};

using FieldSampler = std::function<LatticeField(std::uint64_t stream)>;

/// Resolve the choice to a sampling closure.  Construction-time validation
/// (resolvability, torus guards) runs here, so errors surface before any
/// stream is drawn.
inline FieldSampler make_sampler(const SamplerChoice& c) {
    if (c.construction == "spectral") {
        const double s = c.exponent.value_or(0.5 * static_cast<double>(c.grid.dim()));
        const auto sampler = std::make_shared<SpectralSampler>(SpectralSamplerConfig{c.grid, {s}, c.seed});
        return [sampler](std::uint64_t stream) { return sampler->sample(stream); };
    }
    if (c.construction == "white-noise") {
        const LatticeGrid g = c.grid;
        const std::uint64_t seed = c.seed;
        return [g, seed](std::uint64_t stream) { return sample_white_noise(g, seed, stream); };
    }
    if (c.construction == "cascade") {
        const CascadeConfig cfg{c.grid.dim(), c.level_min, c.level_max, c.origin, c.alpha, c.seed};
        cfg.validate();
        const LatticeGrid g = c.grid;
        return [cfg, g](std::uint64_t stream) { return sample_cascade_on_grid(cfg, g, stream); };
    }
    if (c.construction == "cone") {
        const auto sampler = std::make_shared<ConeSampler>(ConeConfig{c.grid, c.epsilon, c.seed, c.slabs_per_efold});
        return [sampler](std::uint64_t stream) { return sampler->sample(stream); };
    }
    if (c.construction == "conv") {
        const auto sampler = std::make_shared<ConvolutionSampler>(ConvolutionConfig{c.grid, c.epsilon, c.seed});
        return [sampler](std::uint64_t stream) { return sampler->sample(stream); };
    }
    if (c.construction == "kahane") {
        const auto sampler =
            std::make_shared<KahaneSampler>(KahaneConfig{c.grid, c.t, c.seed, c.slabs_per_efold, c.bump_radius});
        return [sampler](std::uint64_t stream) { return sampler->sample(stream); };
    }
    if (c.construction == "volatility") {
        const auto sampler = std::make_shared<VolatilitySampler>(VolatilityConfig{c.grid, c.corr_range, c.seed});
        return [sampler](std::uint64_t stream) { return sampler->sample(stream); };
    }
    throw std::invalid_argument("make_sampler: unknown construction \"" + c.construction +
                                "\" (expected spectral, white-noise, cascade, cone, conv, kahane, or volatility)");
}

}  // namespace fgf

#endif
