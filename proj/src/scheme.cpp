#include "sdelab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdelab/rng.hpp"

namespace sdelab::scheme {

void SchemeParams::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("SchemeParams: T > 0 required");
    if (n < 1) throw std::invalid_argument("SchemeParams: n >= 1 required");
    if (!(B > 0.0)) throw std::invalid_argument("SchemeParams: B > 0 required");
    if (static_cast<int>(x.size()) != drift.dimension())
        throw std::invalid_argument("SchemeParams: start point dimension mismatch");
    const ConditionReport rep = drift.condition();
    if (!rep.admissible)
        throw std::invalid_argument("SchemeParams: inadmissible drift: " +
                                    rep.failure_reason.value_or(""));
}

double step_floor(double s, double h) {
    if (s < 0.0 || !(h > 0.0)) throw std::invalid_argument("step_floor: s >= 0, h > 0");
    return std::floor(s / h) * h;
}

Vec cutoff_drift(const SchemeParams& p, double t, const Vec& x) {
    return p.variant == Variant::Primary
               ? cutoff_primary(p.drift, p.h(), p.B, t, x)
               : cutoff_zero_first(p.drift, p.h(), p.B, t, x);
}

PathSample simulate_path(const SchemeParams& p, std::uint64_t seed, std::uint64_t stream) {
    p.validate();
    const int d = p.dim();
    const double h = p.h();
    const double sqh = std::sqrt(h);
    const rng::Substream gauss(seed, stream, rng::SUB_GAUSS);
    const rng::Substream unif(seed, stream, rng::SUB_UNIFORM);

    PathSample out;
    out.seed = seed;
    out.stream = stream;
    out.times.resize(p.n + 1);
    out.states.resize(p.n + 1);
    out.u_draws.resize(p.n);
    out.dw.resize(p.n);
    for (int k = 0; k <= p.n; ++k) out.times[k] = k * p.T / p.n;
    out.states[0] = p.x;

    for (int k = 0; k < p.n; ++k) {
        const double tk = out.times[k];
        out.u_draws[k] = tk + h * unif.uniform(static_cast<std::uint64_t>(k));
        Vec& w = out.dw[k];
        w.resize(d);
        for (int i = 0; i < d; ++i)
            w[i] = sqh * gauss.normal(static_cast<std::uint64_t>(k) * d + i);
        const Vec b = cutoff_drift(p, out.u_draws[k], out.states[k]);
        Vec next(d);
        for (int i = 0; i < d; ++i) next[i] = out.states[k][i] + w[i] + b[i] * h;
        out.states[k + 1] = std::move(next);
    }
    return out;
}

Vec simulate_terminal(const SchemeParams& p, std::uint64_t seed, std::uint64_t stream,
                      int substep) {
    p.validate();
    if (substep < 1) throw std::invalid_argument("simulate_terminal: substep >= 1");
    const int d = p.dim();
    const double h = p.h();
    const double sqhf = std::sqrt(h / substep);
    const rng::Substream gauss(seed, stream, rng::SUB_GAUSS);
    const rng::Substream unif(seed, stream, rng::SUB_UNIFORM);

    Vec x = p.x;
    Vec w(d), b;
    for (int k = 0; k < p.n; ++k) {
        const double tk = k * p.T / p.n;
        const std::uint64_t fine0 = static_cast<std::uint64_t>(k) * substep;
        const double u = tk + h * unif.uniform(fine0);
        std::fill(w.begin(), w.end(), 0.0);
        for (int j = 0; j < substep; ++j)
            for (int i = 0; i < d; ++i)
                w[i] += sqhf * gauss.normal((fine0 + j) * d + i);
        b = cutoff_drift(p, u, x);
        // same association as simulate_path so substep = 1 is bit-identical
        for (int i = 0; i < d; ++i) x[i] = x[i] + w[i] + b[i] * h;
    }
    return x;
}

std::vector<Vec> simulate_terminals(const SchemeParams& p, int count, std::uint64_t seed,
                                    int substep) {
    if (count < 1) throw std::invalid_argument("simulate_terminals: count >= 1");
    std::vector<Vec> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = simulate_terminal(p, seed, static_cast<std::uint64_t>(i), substep);
    return out;
}

}  // namespace sdelab::scheme
