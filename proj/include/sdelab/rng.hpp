#pragma once

#include <cstdint>
#include <stdexcept>

namespace sdelab::rng {

// Counter-based generator built on the splitmix64 finalizer.  Every variate
// is a pure function of (seed, stream, substream, counter), so any draw can
// be reproduced in isolation and batches are independent of worker
// partitioning.  Documented layout:
//   base    = fin(fin(seed) + G1*stream + G2*substream)
//   u64(k)  = fin(base + G1*k)
// with fin the splitmix64 output mix and G1, G2 the usual odd constants.

inline constexpr std::uint64_t GAMMA1 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t GAMMA2 = 0xBF58476D1CE4E5B9ULL;

inline std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Normal quantile (Wichura, algorithm AS 241, PPND16).  Relative error
/// below 1e-15 on (0,1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
    const double q = p - 0.5;
    double r;
    if (q < 0.425 && q > -0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -v : v;
}

/// One substream of one stream of a seeded generator; purely counter-indexed.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
        : base_(finalize(finalize(seed) + GAMMA1 * stream + GAMMA2 * substream)) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return finalize(base_ + GAMMA1 * counter);
    }
    /// Uniform on (0,1): 53-bit mantissa centered in its cell, never 0 or 1.
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal(std::uint64_t counter) const { return normal_quantile(uniform(counter)); }

private:
    std::uint64_t base_;
};

// Substream roles used by the scheme module.
inline constexpr std::uint64_t SUB_GAUSS = 0;    // counter k*d + i: component i of step k
inline constexpr std::uint64_t SUB_UNIFORM = 1;  // counter k: randomization draw of step k

}  // namespace sdelab::rng
