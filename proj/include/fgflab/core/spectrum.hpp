#ifndef FGFLAB_CORE_SPECTRUM_HPP
#define FGFLAB_CORE_SPECTRUM_HPP

// Physical Fourier transform on the periodic lattice, and the weighted
// spectral inner products built on it.
//
// Normalization contract "unitary-angular-v1", used everywhere and recorded
// in field file headers:
//
//   forward:  fhat(n) = (2 pi)^{-d/2} dx^d   sum_x f(x) e^{-i k_n . x}
//   inverse:  f(x)    = (2 pi)^{-d/2} dk^d   sum_n fhat(n) e^{+i k_n . x}
//
// with k_n = (2 pi / L) * n componentwise, n in {-N/2, ..., N/2 - 1}, and
// dk = 2 pi / L.  Forward then inverse is the identity (exactly, up to
// rounding), and Parseval reads dx^d sum |f|^2 = dk^d sum |fhat|^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "fft.hpp"
#include "field.hpp"
#include "grid.hpp"

namespace fgf {

inline constexpr const char* dft_normalization_tag = "unitary-angular-v1";

struct SpectralArray {
    LatticeGrid grid;
    std::vector<std::complex<double>> coeff;  // row-major over frequency multi-indices

    explicit SpectralArray(LatticeGrid g) : grid(g), coeff(g.site_count(), {0.0, 0.0}) {}
};

/// Signed frequency integer for storage index j on one axis: j, or j - N for
/// the upper half, giving the range {-N/2, ..., N/2 - 1}.
inline int signed_frequency(const LatticeGrid& grid, int j) {
    const int n = grid.points_per_axis();
    return (j < n / 2) ? j : j - n;
}

/// Angular wavevector at a raveled spectral index.
inline Point wavevector(const LatticeGrid& grid, std::size_t idx) {
    const auto mi = grid.unravel(idx);
    const double dk = 2.0 * 3.14159265358979323846 / grid.box_length();
    Point k{0.0, 0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) k[a] = dk * signed_frequency(grid, mi[a]);
    return k;
}

inline double wavenumber_sq(const LatticeGrid& grid, std::size_t idx) {
    const Point k = wavevector(grid, idx);
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) k2 += k[a] * k[a];
    return k2;
}

/// Mode spacing volume dk^d = (2 pi / L)^d.
inline double mode_volume(const LatticeGrid& grid) {
    double v = 1.0;
    for (int a = 0; a < grid.dim(); ++a) v *= 2.0 * 3.14159265358979323846 / grid.box_length();
    return v;
}

/// Index of the conjugate mode -n (mod N per axis).
inline std::size_t conjugate_mode(const LatticeGrid& grid, std::size_t idx) {
    auto mi = grid.unravel(idx);
    const int n = grid.points_per_axis();
    std::array<int, 4> cm{0, 0, 0, 0};
    for (int a = 0; a < grid.dim(); ++a) cm[a] = (n - mi[a]) % n;
    return grid.ravel({cm.data(), static_cast<std::size_t>(grid.dim())});
}

namespace detail {

inline double forward_scale(const LatticeGrid& g) {
    double s = 1.0;
    for (int a = 0; a < g.dim(); ++a) s *= g.spacing() / std::sqrt(2.0 * 3.14159265358979323846);
    return s;
}

inline double inverse_scale(const LatticeGrid& g) {
    double s = 1.0;
    for (int a = 0; a < g.dim(); ++a)
        s *= (2.0 * 3.14159265358979323846 / g.box_length()) / std::sqrt(2.0 * 3.14159265358979323846);
    return s;
}

}  // namespace detail

inline SpectralArray dft_forward(const LatticeGrid& grid, const std::vector<double>& values) {
    if (values.size() != grid.site_count()) throw std::invalid_argument("dft_forward: size mismatch");
    SpectralArray out(grid);
    for (std::size_t i = 0; i < values.size(); ++i) out.coeff[i] = {values[i], 0.0};
    fft_nd(out.coeff.data(), grid, /*inverse=*/false);
    const double s = detail::forward_scale(grid);
    for (auto& c : out.coeff) c *= s;
    return out;
}

inline SpectralArray dft_forward(const LatticeField& f) { return dft_forward(f.grid, f.values); }
inline SpectralArray dft_forward(const SiteFunction& f) { return dft_forward(f.grid(), f.values()); }

/// Inverse transform of a Hermitian-symmetric array; returns the real field.
/// Throws if the imaginary residue exceeds 1e-8 of the field scale, which
/// indicates the input was not conjugate-symmetric.
inline LatticeField dft_inverse_real(const SpectralArray& sp) {
    std::vector<std::complex<double>> buf(sp.coeff);
    fft_nd(buf.data(), sp.grid, /*inverse=*/true);
    const double s = detail::inverse_scale(sp.grid);
    LatticeField out(sp.grid);
    double max_im = 0.0, max_re = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const double re = buf[i].real() * s;
        const double im = buf[i].imag() * s;
        out.values[i] = re;
        max_im = std::max(max_im, std::abs(im));
        max_re = std::max(max_re, std::abs(re));
    }
    if (max_im > 1e-8 * std::max(max_re, 1e-300))
        throw std::runtime_error("dft_inverse_real: spectrum is not Hermitian (imaginary residue " +
                                 std::to_string(max_im) + ")");
    return out;
}

/// Unrestricted complex inverse; used by tests and diagnostics.
inline std::vector<std::complex<double>> dft_inverse_complex(const SpectralArray& sp) {
    std::vector<std::complex<double>> buf(sp.coeff);
    fft_nd(buf.data(), sp.grid, /*inverse=*/true);
    const double s = detail::inverse_scale(sp.grid);
    for (auto& c : buf) c *= s;
    return buf;
}

/// Exact covariance function of a stationary spectral construction: given
/// the per-mode density D(n) = E|hhat(n)|^2, returns Cov[h(x), h(0)] as a
/// lattice array.  Cov(x) = dk^{2d}/(2pi)^d sum_n D(n) e^{i k_n x}, which is
/// the inverse transform of D rescaled by one extra mode-volume factor.
inline std::vector<double> covariance_from_mode_density(const LatticeGrid& grid,
                                                        const std::vector<double>& density) {
    if (density.size() != grid.site_count())
        throw std::invalid_argument("covariance_from_mode_density: size mismatch");
    SpectralArray sp(grid);
    for (std::size_t i = 0; i < density.size(); ++i) sp.coeff[i] = {density[i], 0.0};
    LatticeField c = dft_inverse_real(sp);
    const double scale = mode_volume(grid) / std::pow(2.0 * 3.14159265358979323846, 0.5 * grid.dim());
    for (double& v : c.values) v *= scale;
    return std::move(c.values);
}

/// Weighted spectral inner product sum_{k != 0} |k|^{2s} fhat conj(ghat) dk^d.
/// The zero mode is always excluded; for s < 0 this is what makes the sum
/// finite, and mean-zero inputs have no mass there anyway.
inline double sobolev_inner_product(const TestFunction& f, const TestFunction& g, SpectralExponent s) {
    if (f.grid() != g.grid()) throw std::invalid_argument("sobolev_inner_product: grids differ");
    const SpectralArray fh = dft_forward(f);
    const SpectralArray gh = dft_forward(g);
    fgf::detail::CompensatedSum acc;
    for (std::size_t i = 1; i < fh.coeff.size(); ++i) {
        const double k2 = wavenumber_sq(fh.grid, i);
        if (k2 == 0.0) continue;  // raveled index 0 is the zero mode; guard anyway
        const double w = std::pow(k2, s.s);  // |k|^{2s}
        acc.add(w * (fh.coeff[i] * std::conj(gh.coeff[i])).real());
    }
    return mode_volume(f.grid()) * acc.value();
}

}  // namespace fgf

#endif
