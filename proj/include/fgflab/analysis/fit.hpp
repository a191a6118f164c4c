#ifndef FGFLAB_ANALYSIS_FIT_HPP
#define FGFLAB_ANALYSIS_FIT_HPP

// Least-squares proportionality fit between estimated covariances and
// kernel-oracle values; absorbs the one undetermined multiplicative
// constant of the covariance identities.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace fgf {

struct ProportionalityFit {
    double scale = 0.0;      // fitted c in estimate ~ c * oracle
    double residual = 0.0;   // max relative error over pairs above the noise floor
    std::size_t pairs_used = 0;
};

/// Fit estimates ~ c * oracles through the origin.  The residual is the max
/// of |e - c*o| / |c*o| over pairs with |o| >= 2% of max |o| and, when
/// standard errors are given, |c*o| >= 2 SE (tinier targets only measure
/// Monte-Carlo noise, not proportionality).
inline ProportionalityFit fit_proportionality(std::span<const double> estimates, std::span<const double> oracles,
                                              std::span<const double> standard_errors = {}) {
    const std::size_t n = estimates.size();
    if (n != oracles.size() || (!standard_errors.empty() && standard_errors.size() != n))
        throw std::invalid_argument("fit_proportionality: length mismatch");
    if (n < 3) throw std::invalid_argument("fit_proportionality: need at least 3 pairs");

    double num = 0.0, den = 0.0, omax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += estimates[i] * oracles[i];
        den += oracles[i] * oracles[i];
        omax = std::max(omax, std::abs(oracles[i]));
    }
    if (den == 0.0 || omax == 0.0) throw std::invalid_argument("fit_proportionality: oracle values are all zero");
    const double c = num / den;

    ProportionalityFit fit;
    fit.scale = c;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = std::abs(c * oracles[i]);
        if (std::abs(oracles[i]) < 0.02 * omax) continue;
        if (!standard_errors.empty() && target < 2.0 * standard_errors[i]) continue;
        fit.residual = std::max(fit.residual, std::abs(estimates[i] - c * oracles[i]) / target);
        ++fit.pairs_used;
    }
    if (fit.pairs_used == 0)
        throw std::runtime_error("fit_proportionality: every pair fell below the noise floor; increase samples");
    return fit;
}

}  // namespace fgf

#endif
