#ifndef FGFLAB_CORE_FFT_HPP
#define FGFLAB_CORE_FFT_HPP

// Iterative radix-2 complex FFT and its separable n-dimensional extension.
//
// Transforms are unnormalized: forward applies sum_j x_j e^{-2 pi i jk/n},
// inverse applies sum_k X_k e^{+2 pi i jk/n}.  Callers own normalization.
// Twiddle factors use the same portable trig as the RNG, so transformed
// fields are reproducible across platforms, not just within one libm.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "rng.hpp"

namespace fgf {
namespace detail {

// Twiddle table for length n (power of two): w[j] = e^{-2 pi i j/n}, j < n/2.
// Phases j/n are exact dyadic rationals, so the table is deterministic.
inline std::vector<std::complex<double>> twiddle_table(std::size_t n) {
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double s, c;
        portable_sincos_2pi(static_cast<double>(j) / static_cast<double>(n), s, c);
        w[j] = {c, -s};
    }
    return w;
}

inline void fft_radix2(std::complex<double>* x, std::size_t n, bool inverse,
                       const std::vector<std::complex<double>>& w) {
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> tw = w[j * step];
                if (inverse) tw = std::conj(tw);
                const std::complex<double> u = x[i + j];
                const std::complex<double> v = x[i + j + len / 2] * tw;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace detail

/// In-place 1D transform; n must be a power of two.
inline void fft(std::complex<double>* x, std::size_t n, bool inverse) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    const auto w = detail::twiddle_table(n);
    detail::fft_radix2(x, n, inverse, w);
}

/// In-place separable transform over all axes of a row-major N^d array.
inline void fft_nd(std::complex<double>* data, const LatticeGrid& grid, bool inverse) {
    const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
    const std::size_t total = grid.site_count();
    if (n == 1) return;
    const auto w = detail::twiddle_table(n);
    std::vector<std::complex<double>> line(n);
    // Axis a has stride n^(dim-1-a) in row-major order.
    std::size_t stride = 1;
    for (int a = grid.dim() - 1; a >= 0; --a) {
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                std::complex<double>* p = data + base + off;
                if (stride == 1) {
                    detail::fft_radix2(p, n, inverse, w);
                } else {
                    for (std::size_t j = 0; j < n; ++j) line[j] = p[j * stride];
                    detail::fft_radix2(line.data(), n, inverse, w);
                    for (std::size_t j = 0; j < n; ++j) p[j * stride] = line[j];
                }
            }
        }
        stride *= n;
    }
}

}  // namespace fgf

#endif
