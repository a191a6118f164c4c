#ifndef FGFLAB_CORE_GRID_HPP
#define FGFLAB_CORE_GRID_HPP

// Periodic lattice geometry: N^d sites on a torus of side L, row-major
// storage, minimum-image metric.  Dimensions 1..4, N a power of two.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace fgf {

/// Point in R^d, d <= 4; unused components are zero.
using Point = std::array<double, 4>;

class LatticeGrid {
  public:
    LatticeGrid(int dim, int points_per_axis, double box_length)
        : dim_(dim), n_(points_per_axis), box_(box_length) {
        if (dim < 1 || dim > 4)
            throw std::invalid_argument("LatticeGrid: dim must be in 1..4, got " + std::to_string(dim));
        if (n_ < 2 || (n_ & (n_ - 1)) != 0)
            throw std::invalid_argument("LatticeGrid: points per axis must be a power of two >= 2, got " +
                                        std::to_string(n_));
        if (!(box_ > 0.0))
            throw std::invalid_argument("LatticeGrid: box length must be positive");
        dx_ = box_ / static_cast<double>(n_);
        sites_ = 1;
        for (int a = 0; a < dim_; ++a) sites_ *= static_cast<std::size_t>(n_);
    }

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double box_length() const { return box_; }
    double spacing() const { return dx_; }
    std::size_t site_count() const { return sites_; }

    /// Cell volume dx^d.
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim_; ++a) v *= dx_;
        return v;
    }

    /// Row-major site index -> per-axis indices (axis 0 slowest).
    std::array<int, 4> unravel(std::size_t idx) const {
        std::array<int, 4> out{0, 0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            out[a] = static_cast<int>(idx % static_cast<std::size_t>(n_));
            idx /= static_cast<std::size_t>(n_);
        }
        return out;
    }

    std::size_t ravel(std::span<const int> mi) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim_; ++a) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(mi[a]);
        return idx;
    }

    Point position(std::size_t idx) const {
        const auto mi = unravel(idx);
        Point p{0.0, 0.0, 0.0, 0.0};
        for (int a = 0; a < dim_; ++a) p[a] = mi[a] * dx_;
        return p;
    }

    /// Index of the lattice site nearest to p (rounding per axis, periodic).
    std::size_t nearest_site(const Point& p) const {
        std::array<int, 4> mi{0, 0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            const long k = std::lround(p[a] / dx_);
            mi[a] = static_cast<int>(((k % n_) + n_) % n_);
        }
        return ravel(mi);
    }

    /// Minimum-image displacement component in (-L/2, L/2].
    double min_image(double delta) const {
        delta = std::fmod(delta, box_);
        if (delta > 0.5 * box_) delta -= box_;
        if (delta <= -0.5 * box_) delta += box_;
        return delta;
    }

    double torus_distance(const Point& a, const Point& b) const {
        double r2 = 0.0;
        for (int ax = 0; ax < dim_; ++ax) {
            const double d = min_image(a[ax] - b[ax]);
            r2 += d * d;
        }
        return std::sqrt(r2);
    }

    bool operator==(const LatticeGrid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && box_ == o.box_;
    }
    bool operator!=(const LatticeGrid& o) const { return !(*this == o); }

  private:
    int dim_;
    int n_;
    double box_;
    double dx_;
    std::size_t sites_;
};

/// Volume of the unit ball in d dimensions, d <= 4.
inline double unit_ball_volume(int d) {
    constexpr double pi = 3.14159265358979323846;
    switch (d) {
        case 1: return 2.0;
        case 2: return pi;
        case 3: return 4.0 * pi / 3.0;
        case 4: return pi * pi / 2.0;
        default: throw std::invalid_argument("unit_ball_volume: d must be 1..4");
    }
}

}  // namespace fgf

#endif
