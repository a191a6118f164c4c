#ifndef FGFLAB_CORE_RNG_HPP
#define FGFLAB_CORE_RNG_HPP

// Counter-based random number generator with portable Gaussian transforms.
//
// Every draw is a pure function of (seed, stream, counter), so samples can be
// generated in any order, from any thread, on any platform, and still agree
// bit for bit.  The Box-Muller transform below deliberately avoids libm's
// log/sin/cos, whose results differ across platforms; the replacements use
// only IEEE-exact operations (+, -, *, /, sqrt) plus fixed-length series.

#include <cmath>
#include <concepts>
#include <cstdint>

namespace fgf {

namespace detail {

inline constexpr std::uint64_t golden64 = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer.  Bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

// Order-dependent combine for hashing multi-indices into a key.
inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64((h ^ mix64(v + golden64)) * 0xff51afd7ed558ccdull + 0x2545f4914f6cdd1dull);
}

// log(x) for x > 0 via frexp and the atanh series, with a two-part ln 2 so
// the exponent contribution rounds the same way everywhere.
inline double portable_log(double x) {
    constexpr double ln2_hi = 6.93147180369123816490e-01;
    constexpr double ln2_lo = 1.90821492927058770002e-10;
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
    if (m < 0.70710678118654752440) {
        m *= 2.0;
        e -= 1;
    }
    const double t = (m - 1.0) / (m + 1.0);  // |t| <= sqrt(2) - 1 over [1/sqrt2, sqrt2)
    const double t2 = t * t;
    // atanh series, fixed length; t^27/27 < 2^-63 at the edge of the range.
    double s = 1.0 / 27.0;
    s = s * t2 + 1.0 / 25.0;
    s = s * t2 + 1.0 / 23.0;
    s = s * t2 + 1.0 / 21.0;
    s = s * t2 + 1.0 / 19.0;
    s = s * t2 + 1.0 / 17.0;
    s = s * t2 + 1.0 / 15.0;
    s = s * t2 + 1.0 / 13.0;
    s = s * t2 + 1.0 / 11.0;
    s = s * t2 + 1.0 / 9.0;
    s = s * t2 + 1.0 / 7.0;
    s = s * t2 + 1.0 / 5.0;
    s = s * t2 + 1.0 / 3.0;
    s = s * t2 + 1.0;
    const double lnm = 2.0 * t * s;
    return static_cast<double>(e) * ln2_hi + (static_cast<double>(e) * ln2_lo + lnm);
}

// cos(2 pi v) for v in [0, 1/8]; Taylor in z = (2 pi v)^2 <= pi^2/16.
// The first omitted term is z^10/20! < 4e-21 at the edge of the range.
inline double cos_poly(double v) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double z = (two_pi * v) * (two_pi * v);
    double c = 1.0 / 6402373705728000.0;  // 1/18!
    c = 1.0 / 20922789888000.0 - c * z;   // 1/16!
    c = 1.0 / 87178291200.0 - c * z;      // 1/14!
    c = 1.0 / 479001600.0 - c * z;        // 1/12!
    c = 1.0 / 3628800.0 - c * z;          // 1/10!
    c = 1.0 / 40320.0 - c * z;            // 1/8!
    c = 1.0 / 720.0 - c * z;              // 1/6!
    c = 1.0 / 24.0 - c * z;               // 1/4!
    c = 0.5 - c * z;                      // 1/2!
    return 1.0 - c * z;
}

// sin(2 pi v) for v in [0, 1/8].
inline double sin_poly(double v) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double w = two_pi * v;
    const double z = w * w;
    double c = 1.0 / 121645100408832000.0;  // 1/19!
    c = 1.0 / 355687428096000.0 - c * z;    // 1/17!
    c = 1.0 / 1307674368000.0 - c * z;      // 1/15!
    c = 1.0 / 6227020800.0 - c * z;         // 1/13!
    c = 1.0 / 39916800.0 - c * z;           // 1/11!
    c = 1.0 / 362880.0 - c * z;             // 1/9!
    c = 1.0 / 5040.0 - c * z;               // 1/7!
    c = 1.0 / 120.0 - c * z;                // 1/5!
    c = 1.0 / 6.0 - c * z;                  // 1/3!
    return w * (1.0 - c * z);
}

// sin and cos of 2 pi u for u in [0, 1).  All range reductions are exact
// (Sterbenz subtractions of dyadic rationals), so results are reproducible.
inline void portable_sincos_2pi(double u, double& s, double& c) {
    double t = (u >= 0.5) ? u - 1.0 : u;  // exact; t in [-0.5, 0.5)
    const double sign_s = (t < 0.0) ? -1.0 : 1.0;
    const double a = (t < 0.0) ? -t : t;
    if (a <= 0.25) {
        if (a <= 0.125) {
            c = cos_poly(a);
            s = sin_poly(a);
        } else {
            const double v = 0.25 - a;  // exact
            c = sin_poly(v);
            s = cos_poly(v);
        }
    } else {
        const double b = 0.5 - a;  // exact; b in [0, 0.25)
        if (b <= 0.125) {
            c = -cos_poly(b);
            s = sin_poly(b);
        } else {
            const double v = 0.25 - b;  // exact
            c = -sin_poly(v);
            s = cos_poly(v);
        }
    }
    s *= sign_s;
}

}  // namespace detail

/// Keyed counter RNG.  Draw i of stream j under seed s is the same 64-bit
/// word on every platform and in every evaluation order.
class SeededRng {
  public:
    SeededRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::hash_combine(detail::mix64(seed + detail::golden64), stream)),
          key2_(detail::mix64(key_ ^ 0x6a09e667f3bcc909ull)) {}

    /// Independent child generator; used for per-level / per-slab subkeys.
    SeededRng derive(std::uint64_t tag) const {
        return SeededRng(raw_tag{}, detail::hash_combine(key_, tag));
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return detail::mix64(key_ ^ detail::mix64(counter + detail::golden64));
    }

    /// Uniform in the open interval (0, 1); never returns 0 or 1.
    double uniform(std::uint64_t counter) const {
        return to_unit(bits(counter));
    }

    /// One standard Gaussian per counter (cosine branch of Box-Muller).
    double gaussian(std::uint64_t counter) const {
        double z0, z1;
        gaussian_pair(counter, z0, z1);
        return z0;
    }

    /// Two independent standard Gaussians from one counter.
    void gaussian_pair(std::uint64_t counter, double& z0, double& z1) const {
        const double u1 = to_unit(bits(counter));
        const double u2 = to_unit(detail::mix64(key2_ ^ detail::mix64(counter + detail::golden64)));
        const double r = std::sqrt(-2.0 * detail::portable_log(u1));
        double s, c;
        detail::portable_sincos_2pi(u2, s, c);
        z0 = r * c;
        z1 = r * s;
    }

  private:
    struct raw_tag {};
    SeededRng(raw_tag, std::uint64_t raw_key)
        : key_(raw_key), key2_(detail::mix64(raw_key ^ 0x6a09e667f3bcc909ull)) {}

    // Map 64 random bits to the open interval (0,1): top 53 bits, half-offset.
    static double to_unit(std::uint64_t b) {
        return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t key_;
    std::uint64_t key2_;
};

/// Gaussian keyed by an integer multi-index (e.g. a cube address): the value
/// depends only on (rng key, indices), so overlapping queries agree.
template <class... Ints>
    requires(std::integral<Ints> && ...)
double indexed_gaussian(const SeededRng& rng, Ints... indices) {
    std::uint64_t h = 0x3c6ef372fe94f82bull;
    ((h = detail::hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(indices)))), ...);
    return rng.derive(h).gaussian(0);
}

inline double indexed_gaussian(const SeededRng& rng, const std::int64_t* indices, int count) {
    std::uint64_t h = 0x3c6ef372fe94f82bull;
    for (int i = 0; i < count; ++i) h = detail::hash_combine(h, static_cast<std::uint64_t>(indices[i]));
    return rng.derive(h).gaussian(0);
}

}  // namespace fgf

#endif
