#pragma once

#include <cstdint>
#include <vector>

#include "sdelab/drift.hpp"

namespace sdelab::scheme {

enum class Variant { Primary, ZeroFirst };

struct SchemeParams {
    double T = 1.0;
    int n = 1;          // h = T/n exactly
    Vec x;              // start point, sized to drift dimension
    double B = 1.0;     // cutoff constant
    Variant variant = Variant::Primary;
    DriftSpec drift = DriftSpec::zero(1);

    double h() const { return T / n; }
    int dim() const { return drift.dimension(); }
    /// Throws when the drift fails the admissibility condition or the start
    /// point has the wrong dimension.
    void validate() const;
};

/// tau^h_s = floor(s/h) h: the last grid point at or before s.
double step_floor(double s, double h);

struct PathSample {
    std::vector<double> times;      // t_0..t_n
    std::vector<Vec> states;        // X_0..X_n
    std::vector<double> u_draws;    // U_0..U_{n-1}, U_k in [t_k, t_{k+1}]
    std::vector<Vec> dw;            // Brownian increments over each step
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Cutoffed drift of the requested variant at (t, x).
Vec cutoff_drift(const SchemeParams& p, double t, const Vec& x);

/// One full trajectory; a pure function of (params, seed, stream).  The
/// randomization draws and the Brownian increments come from disjoint
/// substreams, so either can be replayed independently of the other.
PathSample simulate_path(const SchemeParams& p, std::uint64_t seed, std::uint64_t stream);

/// Terminal state only.  With `substep` m > 1 the Brownian increments are
/// sums of m sub-increments drawn at the counters a path with n*m steps
/// would use, and U_k is drawn at uniform counter k*m: this couples the
/// coarse scheme to the n*m-step scheme on the same stream (common random
/// numbers).  m = 1 matches simulate_path exactly.
Vec simulate_terminal(const SchemeParams& p, std::uint64_t seed, std::uint64_t stream,
                      int substep = 1);

/// count independent terminal values, sample i from stream i.  Deterministic
/// in (params, count, seed) and independent of any worker partitioning.
std::vector<Vec> simulate_terminals(const SchemeParams& p, int count, std::uint64_t seed,
                                    int substep = 1);

}  // namespace sdelab::scheme
