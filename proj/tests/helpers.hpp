#ifndef FGFLAB_TESTS_HELPERS_HPP
#define FGFLAB_TESTS_HELPERS_HPP

// Shared test-only utilities.

#include <array>
#include <cstddef>
#include <vector>

#include "fgflab/core/field.hpp"
#include "fgflab/core/grid.hpp"

namespace testutil {

/// Exact pairing covariance of a stationary law from its covariance
/// function: Cov[ <h, p1>, <h, p2> ] with <h, p> = dx^d sum h p.
inline double pairing_from_covariance(const std::vector<double>& cov, const fgf::TestFunction& p1,
                                      const fgf::TestFunction& p2) {
    const fgf::LatticeGrid& g = p1.grid();
    const int n = g.points_per_axis();
    double acc = 0.0;
    for (std::size_t i : p1.support()) {
        const auto mi = g.unravel(i);
        for (std::size_t j : p2.support()) {
            const auto mj = g.unravel(j);
            std::array<int, 4> lag{0, 0, 0, 0};
            for (int ax = 0; ax < g.dim(); ++ax) lag[ax] = ((mi[ax] - mj[ax]) % n + n) % n;
            acc += cov[g.ravel(lag)] * p1.values()[i] * p2.values()[j];
        }
    }
    return acc * g.cell_volume() * g.cell_volume();
}

}  // namespace testutil

#endif
