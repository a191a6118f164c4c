#ifndef FGFLAB_SAMPLERS_CASCADE_HPP
#define FGFLAB_SAMPLERS_CASCADE_HPP

// Dyadic additive cascade: independent piecewise-constant levels Y_k, each
// constant on half-open cubes of side 2^{-k} with unit variance per cube,
// plus the split-level combinatorics that give the sum its exact covariance
// (number of shared levels) in closed form.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/field.hpp"
#include "../core/grid.hpp"
#include "../core/rng.hpp"

namespace fgf {

enum class CubeOrigin {
    corner,    // cubes are 2^{-k} translates of [0, 2^{-k})^d
    centered,  // shifted by half a cube: translates of [-2^{-k-1}, 2^{-k-1})^d
};

struct CascadeConfig {
    int dim = 1;
    int level_min = 0;
    int level_max = 0;
    CubeOrigin origin = CubeOrigin::corner;
    double alpha = 1.0;  // per-level weight alpha^k; 1 is the plain cascade
    std::uint64_t seed = 0;

    void validate() const {
        if (dim < 1 || dim > 4) throw std::invalid_argument("CascadeConfig: dim must be 1..4");
        if (level_min > level_max) throw std::invalid_argument("CascadeConfig: level_min > level_max");
        if (!(alpha > 0.0)) throw std::invalid_argument("CascadeConfig: alpha must be positive");
    }
};

/// Symmetric level range -n..n, the standard truncation of the full sum.
inline CascadeConfig symmetric_cascade(int dim, int n, std::uint64_t seed,
                                       CubeOrigin origin = CubeOrigin::corner) {
    if (n < 0) throw std::invalid_argument("symmetric_cascade: n must be >= 0");
    return CascadeConfig{dim, -n, n, origin, 1.0, seed};
}

/// Index of the level-k cube containing coordinate x (one axis).
inline std::int64_t cube_index(double x, int k, CubeOrigin origin) {
    const double scaled = std::ldexp(x, k);
    return static_cast<std::int64_t>(std::floor(origin == CubeOrigin::centered ? scaled + 0.5 : scaled));
}

/// Smallest k such that x1 and x2 lie in different cubes of side 2^{-k}.
inline int split_level(const Point& x1, const Point& x2, int dim, CubeOrigin origin = CubeOrigin::corner) {
    bool equal = true;
    for (int a = 0; a < dim; ++a) equal = equal && (x1[a] == x2[a]);
    if (equal) throw std::invalid_argument("split_level: points coincide; the split level is infinite");
    for (int k = -62; k <= 200; ++k) {
        for (int a = 0; a < dim; ++a)
            if (cube_index(x1[a], k, origin) != cube_index(x2[a], k, origin)) return k;
    }
    throw std::logic_error("split_level: no split found below level 200");
}

namespace detail {

inline double cube_gaussian(const SeededRng& sample_rng, int k, const Point& x, int dim, CubeOrigin origin) {
    // zigzag so negative levels get distinct subkeys
    const std::uint64_t tag =
        (static_cast<std::uint64_t>(static_cast<std::int64_t>(k)) << 1) ^
        static_cast<std::uint64_t>(static_cast<std::int64_t>(k) >> 63);
    const SeededRng level_rng = sample_rng.derive(tag);
    std::int64_t idx[4] = {0, 0, 0, 0};
    for (int a = 0; a < dim; ++a) idx[a] = cube_index(x[a], k, origin);
    return indexed_gaussian(level_rng, idx, dim);
}

}  // namespace detail

/// One level Y_k evaluated at arbitrary points.  Values are functions of
/// (seed, stream, k, cube index) only, so overlapping queries agree.
inline std::vector<double> sample_level_at(const CascadeConfig& cfg, int k, std::span<const Point> points,
                                           std::uint64_t stream = 0) {
    cfg.validate();
    const SeededRng rng(cfg.seed, stream);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out[i] = detail::cube_gaussian(rng, k, points[i], cfg.dim, cfg.origin);
    return out;
}

/// Weighted level sum sum_{k in range} alpha^k Y_k at arbitrary points.
inline std::vector<double> sample_cascade_at(const CascadeConfig& cfg, std::span<const Point> points,
                                             std::uint64_t stream = 0) {
    cfg.validate();
    const SeededRng rng(cfg.seed, stream);
    std::vector<double> out(points.size(), 0.0);
    for (int k = cfg.level_min; k <= cfg.level_max; ++k) {
        const double w = (cfg.alpha == 1.0) ? 1.0 : std::pow(cfg.alpha, k);
        for (std::size_t i = 0; i < points.size(); ++i)
            out[i] += w * detail::cube_gaussian(rng, k, points[i], cfg.dim, cfg.origin);
    }
    return out;
}

/// Exact covariance of the truncated weighted sum at two points: levels
/// below the split level contribute alpha^{2k}, the rest are independent.
/// Coinciding points share every level (the variance; 2n+1 levels at
/// alpha=1 on a symmetric range).
inline double cascade_covariance(const CascadeConfig& cfg, const Point& x1, const Point& x2) {
    cfg.validate();
    bool equal = true;
    for (int a = 0; a < cfg.dim; ++a) equal = equal && (x1[a] == x2[a]);
    const int top = equal ? cfg.level_max : std::min(cfg.level_max, split_level(x1, x2, cfg.dim, cfg.origin) - 1);
    double acc = 0.0;
    for (int k = cfg.level_min; k <= top; ++k) acc += (cfg.alpha == 1.0) ? 1.0 : std::pow(cfg.alpha, 2 * k);
    return acc;
}

/// Level Y_k on a whole grid.  The cube side must be resolvable (at least
/// one lattice spacing), otherwise aliasing would misrepresent the level.
inline LatticeField sample_level_on_grid(const CascadeConfig& cfg, int k, const LatticeGrid& grid,
                                         std::uint64_t stream = 0) {
    cfg.validate();
    if (grid.dim() != cfg.dim) throw std::invalid_argument("sample_level_on_grid: dimension mismatch");
    if (std::ldexp(1.0, -k) < grid.spacing())
        throw std::invalid_argument("sample_level_on_grid: cube side 2^-" + std::to_string(k) +
                                    " is below the lattice spacing");
    const SeededRng rng(cfg.seed, stream);
    LatticeField f(grid);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = detail::cube_gaussian(rng, k, grid.position(i), cfg.dim, cfg.origin);
    f.construction = "cascade-level";
    f.seed = cfg.seed;
    f.params = {{"level", static_cast<double>(k)},
                {"alpha", cfg.alpha},
                {"origin_centered", cfg.origin == CubeOrigin::centered ? 1.0 : 0.0}};
    return f;
}

/// Truncated cascade on a whole grid (finest level must be resolvable).
inline LatticeField sample_cascade_on_grid(const CascadeConfig& cfg, const LatticeGrid& grid,
                                           std::uint64_t stream = 0) {
    cfg.validate();
    if (grid.dim() != cfg.dim) throw std::invalid_argument("sample_cascade_on_grid: dimension mismatch");
    if (std::ldexp(1.0, -cfg.level_max) < grid.spacing())
        throw std::invalid_argument("sample_cascade_on_grid: finest cube side is below the lattice spacing");
    const SeededRng rng(cfg.seed, stream);
    LatticeField f(grid);
    for (int k = cfg.level_min; k <= cfg.level_max; ++k) {
        const double w = (cfg.alpha == 1.0) ? 1.0 : std::pow(cfg.alpha, k);
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] += w * detail::cube_gaussian(rng, k, grid.position(i), cfg.dim, cfg.origin);
    }
    f.construction = "cascade";
    f.seed = cfg.seed;
    f.params = {{"level_min", static_cast<double>(cfg.level_min)},
                {"level_max", static_cast<double>(cfg.level_max)},
                {"alpha", cfg.alpha},
                {"origin_centered", cfg.origin == CubeOrigin::centered ? 1.0 : 0.0}};
    return f;
}

/// Double Riemann sum of the split-level kernel L(y,z) against two mean-zero
/// weights.  L diverges on the diagonal, so the supports must be disjoint;
/// overlapping supports are an error (use cascade_covariance against the
/// truncated sum instead, which is finite everywhere).
inline double cascade_kernel_pairing(const TestFunction& phi1, const TestFunction& phi2,
                                     CubeOrigin origin = CubeOrigin::corner) {
    const LatticeGrid& g = phi1.grid();
    if (g != phi2.grid()) throw std::invalid_argument("cascade_kernel_pairing: grids differ");
    for (std::size_t i : phi1.support())
        if (phi2.values()[i] != 0.0)
            throw std::invalid_argument(
                "cascade_kernel_pairing: supports overlap; the split-level kernel diverges on the diagonal");
    detail::CompensatedSum acc;
    for (std::size_t i : phi1.support()) {
        const Point yi = g.position(i);
        for (std::size_t j : phi2.support()) {
            const int L = split_level(yi, g.position(j), g.dim(), origin);
            acc.add(static_cast<double>(L) * phi1.values()[i] * phi2.values()[j]);
        }
    }
    return g.cell_volume() * g.cell_volume() * acc.value();
}

}  // namespace fgf

#endif
