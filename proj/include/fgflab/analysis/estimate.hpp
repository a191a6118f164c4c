#ifndef FGFLAB_ANALYSIS_ESTIMATE_HPP
#define FGFLAB_ANALYSIS_ESTIMATE_HPP

// Monte-Carlo covariance estimation over panels of pairing statistics.
//
// Work is split into fixed blocks of sample indices; workers claim blocks
// with an atomic counter and write partial sums into per-block slots, and
// the final reduction runs in block order.  Estimates are therefore
// bit-identical for any worker count, including 1.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "../core/field.hpp"

namespace fgf {

struct CovarianceEstimate {
    std::size_t first = 0;   // panel indices of the two statistics
    std::size_t second = 0;
    double value = 0.0;      // mean of the product over samples
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Estimate E[v_i v_j] for selected index pairs of a per-sample statistic
/// vector.  `eval(stream, out)` must fill out[0..width) for sample index
/// `stream`, must be thread-safe, and must depend only on `stream`.
template <class Eval>
std::vector<CovarianceEstimate> estimate_product_moments(Eval&& eval, std::size_t width,
                                                         std::span<const std::pair<std::size_t, std::size_t>> wanted,
                                                         std::size_t samples, int jobs = 1) {
    if (samples < 2) throw std::invalid_argument("estimate_product_moments: need at least 2 samples");
    if (width == 0 || wanted.empty()) throw std::invalid_argument("estimate_product_moments: empty panel");
    for (const auto& [i, j] : wanted)
        if (i >= width || j >= width) throw std::invalid_argument("estimate_product_moments: pair index out of range");

    constexpr std::size_t block_size = 64;
    const std::size_t n_blocks = (samples + block_size - 1) / block_size;
    const std::size_t np = wanted.size();

    // per block: sum of products and sum of squared products for each pair
    std::vector<double> partial(n_blocks * np * 2, 0.0);
    std::atomic<std::size_t> next_block{0};

    auto worker = [&]() {
        std::vector<double> stats(width);
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const std::uint64_t begin = b * block_size;
            const std::uint64_t end = std::min<std::uint64_t>(begin + block_size, samples);
            double* slot = partial.data() + b * np * 2;
            for (std::uint64_t s = begin; s < end; ++s) {
                eval(s, std::span<double>(stats));
                for (std::size_t w = 0; w < np; ++w) {
                    const double p = stats[wanted[w].first] * stats[wanted[w].second];
                    slot[2 * w] += p;
                    slot[2 * w + 1] += p * p;
                }
            }
        }
    };

    const int nw = std::max(1, jobs);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<CovarianceEstimate> out(np);
    for (std::size_t w = 0; w < np; ++w) {
        detail::CompensatedSum sum, sumsq;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            sum.add(partial[b * np * 2 + 2 * w]);
            sumsq.add(partial[b * np * 2 + 2 * w + 1]);
        }
        const double m = static_cast<double>(samples);
        const double mean = sum.value() / m;
        const double var = std::max(0.0, sumsq.value() / m - mean * mean);
        out[w] = {wanted[w].first, wanted[w].second, mean, std::sqrt(var / m), samples};
    }
    return out;
}

/// Pairing-covariance panel for a field sampler: statistic w of sample s is
/// pair(sampler(s), fns[w]).
template <class SampleFn>
std::vector<CovarianceEstimate> estimate_pairing_covariances(SampleFn&& sampler, std::span<const TestFunction> fns,
                                                             std::span<const std::pair<std::size_t, std::size_t>> wanted,
                                                             std::size_t samples, int jobs = 1) {
    auto eval = [&](std::uint64_t stream, std::span<double> out) {
        const LatticeField h = sampler(stream);
        for (std::size_t w = 0; w < fns.size(); ++w) out[w] = pair(h, fns[w]);
    };
    return estimate_product_moments(eval, fns.size(), wanted, samples, jobs);
}

/// Convenience single-pair estimate: mean of pair(h,phi1)*pair(h,phi2).
template <class SampleFn>
CovarianceEstimate estimate_covariance(SampleFn&& sampler, const TestFunction& phi1, const TestFunction& phi2,
                                       std::size_t samples, int jobs = 1) {
    if (samples < 100) throw std::invalid_argument("estimate_covariance: need at least 100 samples");
    std::vector<TestFunction> fns{phi1, phi2};
    const std::pair<std::size_t, std::size_t> want[] = {{0, 1}};
    return estimate_pairing_covariances(sampler, fns, want, samples, jobs)[0];
}

/// All (i,j) with i <= j < n: the upper triangle of a panel Gram matrix.
inline std::vector<std::pair<std::size_t, std::size_t>> upper_triangle_pairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out.emplace_back(i, j);
    return out;
}

}  // namespace fgf

#endif
