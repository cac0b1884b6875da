#include "sdelab/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sdelab/gaussian.hpp"
#include "sdelab/quadrature.hpp"

namespace sdelab::density {

namespace {

constexpr double BAND_SIGMAS = 10.0;  // scatter truncation radius, tails < 8e-24

double g1(double u, double x) { return std::exp(-x * x / (2.0 * u)) / std::sqrt(2.0 * M_PI * u); }

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Scalar drift for d = 1; avoids the vector round trip in the hot loops.
// Mirrors DriftSpec::evaluate including the prescribed singular-point zeros.
double drift_scalar(const DriftSpec& b, double t, double z) {
    switch (b.family()) {
        case DriftFamily::Zero: return 0.0;
        case DriftFamily::Constant: return b.mu()[0];
        case DriftFamily::BoundedSign: return -b.beta() * sgn(z);
        case DriftFamily::PowerSingularity: {
            const double az = std::abs(z);
            if (az == 0.0 || az > b.radius()) return 0.0;
            return b.theta() * sgn(z) * std::pow(az, -b.gamma());
        }
        case DriftFamily::TimeSingular: {
            const double inner = drift_scalar(*b.inner(), t, z);
            if (t <= 0.0)
                return inner == 0.0 ? 0.0
                                    : sgn(inner) * std::numeric_limits<double>::infinity();
            return std::pow(t, -b.delta()) * inner;
        }
        case DriftFamily::Custom: return b.evaluate(t, Vec{z})[0];
    }
    return 0.0;
}

struct CutoffCtx {
    const SchemeParams* p = nullptr;
    double h = 0.0;
    double thresh = 0.0;  // magnitude cap of the Primary variant
    bool zero_first = false;

    explicit CutoffCtx(const SchemeParams& params) : p(&params), h(params.h()) {
        const DriftSpec& b = params.drift;
        zero_first = params.variant == scheme::Variant::ZeroFirst;
        const double e = zero_first
                             ? 0.5
                             : b.q().reciprocal() + 0.5 * b.dimension() * b.rho().reciprocal();
        thresh = params.B * std::pow(h, -e);
    }

    double operator()(double t, double z) const {
        if (zero_first && t < h) return 0.0;
        const double v = drift_scalar(p->drift, t, z);
        const double m = std::min(std::abs(v), thresh);
        return sgn(v) * m;
    }
};

// out[i] += amp * g_1(u, point(i) - c) over the band |point - c| <= 10 sqrt(u),
// with the Gaussian evaluated by a second-order multiplicative recurrence
// (three exps per scatter regardless of band width).
void scatter_gauss(double amp, double c, double u, const Grid& g, std::vector<double>& out) {
    const double sigma = std::sqrt(u);
    const double half = BAND_SIGMAS * sigma;
    int i0 = static_cast<int>(std::ceil((c - half - g.lo) / g.delta));
    int i1 = static_cast<int>(std::floor((c + half - g.lo) / g.delta));
    i0 = std::max(i0, 0);
    i1 = std::min(i1, g.n - 1);
    if (i0 > i1) return;
    const double dlt = g.delta;
    const double t0 = g.point(i0) - c;
    const double inv2u = 0.5 / u;
    double v = amp * std::exp(-t0 * t0 * inv2u) / std::sqrt(2.0 * M_PI * u);
    double r = std::exp(-dlt * (2.0 * t0 + dlt) * inv2u);
    const double rq = std::exp(-dlt * dlt / u);
    double* o = out.data();
    for (int i = i0; i <= i1; ++i) {
        o[i] += v;
        v *= r;
        r *= rq;
    }
}

// Band of g_1(u, point(i) - c) values for the separable d = 2 scatter.
void gauss_band(double c, double u, const Grid& g, int& i0, int& i1, std::vector<double>& buf) {
    const double half = BAND_SIGMAS * std::sqrt(u);
    i0 = std::max(static_cast<int>(std::ceil((c - half - g.lo) / g.delta)), 0);
    i1 = std::min(static_cast<int>(std::floor((c + half - g.lo) / g.delta)), g.n - 1);
    buf.clear();
    if (i0 > i1) return;
    const double dlt = g.delta;
    const double t0 = g.point(i0) - c;
    const double inv2u = 0.5 / u;
    double v = std::exp(-t0 * t0 * inv2u) / std::sqrt(2.0 * M_PI * u);
    double r = std::exp(-dlt * (2.0 * t0 + dlt) * inv2u);
    const double rq = std::exp(-dlt * dlt / u);
    buf.reserve(i1 - i0 + 1);
    for (int i = i0; i <= i1; ++i) {
        buf.push_back(v);
        v *= r;
        r *= rq;
    }
}

void finalize_mass(GridDensity& gd) {
    gd.mass = gd.quad_mass();
    gd.tail_defect = 1.0 - gd.mass;
}

}  // namespace

Grid Grid::centered(double center, double L, int N) {
    if (N < 2 || !(L > 0.0)) throw std::invalid_argument("Grid: N >= 2, L > 0 required");
    Grid g;
    g.n = N;
    g.delta = 2.0 * L / (N - 1);
    g.lo = center - L;
    return g;
}

double GridDensity::quad_mass() const {
    double m = 0.0;
    if (d == 1) {
        for (int i = 0; i < axis.n; ++i) m += axis.weight(i) * values[i];
    } else {
        for (int ix = 0; ix < axis.n; ++ix)
            for (int iy = 0; iy < axis.n; ++iy)
                m += axis.weight(ix) * axis.weight(iy) * values[ix * axis.n + iy];
    }
    return m;
}

double displacement_budget(const DriftSpec& drift, double T) {
    switch (drift.family()) {
        case DriftFamily::Zero: return 0.0;
        case DriftFamily::Constant: {
            double s = 0.0;
            for (double m : drift.mu()) s += m * m;
            return std::sqrt(s) * T;
        }
        case DriftFamily::BoundedSign: return drift.beta() * T;
        case DriftFamily::PowerSingularity:
            return drift.theta() * std::pow(std::min(drift.radius(), 1.0), -drift.gamma()) * T;
        case DriftFamily::TimeSingular:
            return displacement_budget(*drift.inner(), 1.0) * std::pow(T, 1.0 - drift.delta()) /
                   (1.0 - drift.delta());
        case DriftFamily::Custom: return T;
    }
    return T;
}

Grid default_grid(const SchemeParams& p, int N) {
    double c = 0.0;
    for (double xi : p.x) c += xi;
    c /= p.x.size();
    const double L = 8.0 * std::sqrt(p.T) + displacement_budget(p.drift, p.T);
    return Grid::centered(c, L, N);
}

void step_nodes(const SchemeParams& p, int k, int M,
                std::vector<double>& s, std::vector<double>& w) {
    if (p.drift.time_homogeneous()) {
        s.assign(1, 0.5 * p.h());
        w.assign(1, 1.0);
        return;
    }
    const double tp = k == 0 ? p.drift.time_singularity_power() : 0.0;
    quad::randomization_nodes(M, p.h(), tp, s, w);
}

double first_step_density(const SchemeParams& p, int k, double t,
                          const Vec& x, const Vec& y, int M) {
    const double h = p.h();
    const double tk = k * p.T / p.n;
    const double u = t - tk;
    if (!(u > 0.0) || u > h * (1.0 + 1e-12))
        throw std::invalid_argument("first_step_density: t must lie in (t_k, t_{k+1}]");
    const int d = p.dim();
    std::vector<double> s, w;
    step_nodes(p, k, M, s, w);
    double val = 0.0;
    Vec z(d);
    for (std::size_t m = 0; m < s.size(); ++m) {
        const Vec b = scheme::cutoff_drift(p, tk + s[m], x);
        for (int i = 0; i < d; ++i) z[i] = y[i] - x[i] - u * b[i];
        val += w[m] * gauss::density(d, 1.0, u, z);
    }
    return val;
}

StepKernel build_step_kernel(const SchemeParams& p, int k, const Grid& grid, int M) {
    if (p.dim() != 1) throw std::invalid_argument("build_step_kernel: d = 1 only");
    p.validate();
    const double h = p.h();
    const double tk = k * p.T / p.n;
    std::vector<double> s, w;
    step_nodes(p, k, M, s, w);
    const CutoffCtx bh(p);
    StepKernel out;
    out.grid = grid;
    out.K.assign(static_cast<std::size_t>(grid.n) * grid.n, 0.0);
    for (int iz = 0; iz < grid.n; ++iz) {
        const double z = grid.point(iz);
        for (std::size_t m = 0; m < s.size(); ++m) {
            const double c = z + h * bh(tk + s[m], z);
            for (int iy = 0; iy < grid.n; ++iy)
                out.K[static_cast<std::size_t>(iz) * grid.n + iy] +=
                    w[m] * g1(h, grid.point(iy) - c);
        }
    }
    return out;
}

double StepKernel::row_mass(int iz) const {
    double m = 0.0;
    for (int iy = 0; iy < grid.n; ++iy)
        m += grid.weight(iy) * K[static_cast<std::size_t>(iz) * grid.n + iy];
    return m;
}

std::vector<GridDensity> propagate(const SchemeParams& p, const Grid& grid, int M,
                                   int k0, double mass_budget) {
    p.validate();
    if (k0 < 0 || k0 >= p.n) throw std::invalid_argument("propagate: k0 in [0, n)");
    const int d = p.dim();
    if (d != 1 && d != 2) throw std::invalid_argument("propagate: grid propagation is d <= 2 only");
    const double h = p.h();
    const std::size_t sz = d == 1 ? grid.n : static_cast<std::size_t>(grid.n) * grid.n;

    std::vector<GridDensity> seq;
    seq.reserve(p.n - k0);
    std::vector<double> s, w;
    std::vector<double> bx, by;
    const CutoffCtx bh(p);

    for (int k = k0; k < p.n; ++k) {
        const double tk = k * p.T / p.n;
        step_nodes(p, k, M, s, w);
        GridDensity out;
        out.d = d;
        out.axis = grid;
        out.t = (k + 1) * p.T / p.n;
        out.values.assign(sz, 0.0);

        if (k == k0) {
            // delta start: one analytic mixture step from the point p.x
            for (std::size_t m = 0; m < s.size(); ++m) {
                const Vec b = scheme::cutoff_drift(p, tk + s[m], p.x);
                if (d == 1) {
                    scatter_gauss(w[m], p.x[0] + h * b[0], h, grid, out.values);
                } else {
                    int ix0, ix1, iy0, iy1;
                    gauss_band(p.x[0] + h * b[0], h, grid, ix0, ix1, bx);
                    gauss_band(p.x[1] + h * b[1], h, grid, iy0, iy1, by);
                    for (int ix = ix0; ix <= ix1; ++ix) {
                        const double a = w[m] * bx[ix - ix0];
                        double* row = out.values.data() + static_cast<std::size_t>(ix) * grid.n;
                        for (int iy = iy0; iy <= iy1; ++iy) row[iy] += a * by[iy - iy0];
                    }
                }
            }
        } else {
            const GridDensity& prev = seq.back();
            if (d == 1) {
                for (int iz = 0; iz < grid.n; ++iz) {
                    const double amp = grid.weight(iz) * prev.values[iz];
                    if (amp < 1e-250) continue;  // skips denormal tails only
                    const double z = grid.point(iz);
                    for (std::size_t m = 0; m < s.size(); ++m)
                        scatter_gauss(amp * w[m], z + h * bh(tk + s[m], z), h, grid, out.values);
                }
            } else {
                Vec z(2);
                for (int jx = 0; jx < grid.n; ++jx) {
                    z[0] = grid.point(jx);
                    for (int jy = 0; jy < grid.n; ++jy) {
                        const double amp = grid.weight(jx) * grid.weight(jy) *
                                           prev.values[static_cast<std::size_t>(jx) * grid.n + jy];
                        if (amp < 1e-250) continue;
                        z[1] = grid.point(jy);
                        for (std::size_t m = 0; m < s.size(); ++m) {
                            const Vec b = scheme::cutoff_drift(p, tk + s[m], z);
                            int ix0, ix1, iy0, iy1;
                            gauss_band(z[0] + h * b[0], h, grid, ix0, ix1, bx);
                            gauss_band(z[1] + h * b[1], h, grid, iy0, iy1, by);
                            for (int ix = ix0; ix <= ix1; ++ix) {
                                const double a = amp * w[m] * bx[ix - ix0];
                                double* row =
                                    out.values.data() + static_cast<std::size_t>(ix) * grid.n;
                                for (int iy = iy0; iy <= iy1; ++iy) row[iy] += a * by[iy - iy0];
                            }
                        }
                    }
                }
            }
        }
        finalize_mass(out);
        if (std::abs(out.tail_defect) > mass_budget)
            throw std::runtime_error("propagate: mass defect " +
                                     std::to_string(out.tail_defect) + " at t=" +
                                     std::to_string(out.t) +
                                     " exceeds budget (grid truncation too tight)");
        seq.push_back(std::move(out));
    }
    return seq;
}

GridDensity density_at(const SchemeParams& p, const std::vector<GridDensity>& seq,
                       int k0, double t, int M) {
    if (p.dim() != 1) throw std::invalid_argument("density_at: d = 1 only");
    const double h = p.h();
    const double t0 = k0 * p.T / p.n;
    if (!(t > t0) || t > p.T * (1.0 + 1e-12))
        throw std::invalid_argument("density_at: t in (t_k0, T] required");
    const int j = static_cast<int>(std::llround((t - t0) / h));
    if (j >= 1 && std::abs(t - (t0 + j * h)) <= 1e-9 * h)
        return seq.at(j - 1);  // t is a grid time: stored value
    int l = static_cast<int>(std::floor((t - t0) / h)) + k0;
    l = std::min(l, p.n - 1);
    const double tl = l * p.T / p.n;
    const double u = t - tl;

    std::vector<double> s, w;
    step_nodes(p, l, M, s, w);
    GridDensity out;
    out.d = 1;
    out.axis = seq.front().axis;
    out.t = t;
    out.values.assign(out.axis.n, 0.0);
    const CutoffCtx bh(p);
    if (l == k0) {
        for (std::size_t m = 0; m < s.size(); ++m)
            scatter_gauss(w[m], p.x[0] + u * bh(tl + s[m], p.x[0]), u, out.axis, out.values);
    } else {
        const GridDensity& prev = seq.at(l - 1 - k0);
        for (int iz = 0; iz < out.axis.n; ++iz) {
            const double amp = out.axis.weight(iz) * prev.values[iz];
            if (amp < 1e-250) continue;
            const double z = out.axis.point(iz);
            for (std::size_t m = 0; m < s.size(); ++m)
                scatter_gauss(amp * w[m], z + u * bh(tl + s[m], z), u, out.axis, out.values);
        }
    }
    finalize_mass(out);
    return out;
}

GridDensity reference_density(const SchemeParams& p, int n_ref, const Grid& grid, int M) {
    if (n_ref % p.n != 0 || n_ref / p.n < 16)
        throw std::invalid_argument("reference_density: n_ref must be a multiple of n, >= 16x");
    SchemeParams fine = p;
    fine.n = n_ref;
    return propagate(fine, grid, M).back();
}

DuhamelReport duhamel_residual(const SchemeParams& p, const std::vector<GridDensity>& seq,
                               const Grid& grid, int M) {
    if (p.dim() != 1) throw std::invalid_argument("duhamel_residual: d = 1 only");
    if (static_cast<int>(seq.size()) != p.n)
        throw std::invalid_argument("duhamel_residual: need the full sequence from step 0");
    const double h = p.h();
    const double x0 = p.x[0];
    const CutoffCtx bh(p);
    std::vector<double> s, w;

    // RHS of the Duhamel representation at the final time.  The in-step time
    // integral of b . grad_y g_1 is exact: b . grad_y g_1(u, y-z-br) =
    // -d/dr g_1(u, y-z-br), so each per-step term collapses to a difference
    // of Gaussian convolutions against the stored density.
    std::vector<double> rhs(grid.n, 0.0);
    scatter_gauss(1.0, x0, p.T, grid, rhs);
    std::vector<double> neg(grid.n, 0.0);  // accumulated subtracted field
    for (int j = 0; j < p.n; ++j) {
        const double tj = j * p.T / p.n;
        const double u = p.T - tj;
        step_nodes(p, j, M, s, w);
        if (j == 0) {
            for (std::size_t m = 0; m < s.size(); ++m) {
                const double b = bh(tj + s[m], x0);
                if (b == 0.0) continue;
                scatter_gauss(w[m], x0, u, grid, neg);
                scatter_gauss(-w[m], x0 + h * b, u, grid, neg);
            }
        } else {
            const GridDensity& gj = seq[j - 1];
            for (int iz = 0; iz < grid.n; ++iz) {
                const double amp = grid.weight(iz) * gj.values[iz];
                if (amp < 1e-250) continue;
                const double z = grid.point(iz);
                for (std::size_t m = 0; m < s.size(); ++m) {
                    const double b = bh(tj + s[m], z);
                    if (b == 0.0) continue;
                    scatter_gauss(amp * w[m], z, u, grid, neg);
                    scatter_gauss(-amp * w[m], z + h * b, u, grid, neg);
                }
            }
        }
    }

    DuhamelReport rep;
    const GridDensity& last = seq.back();
    double rho_max = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        rho_max = std::max(rho_max, last.values[i]);
        rep.sup_residual = std::max(rep.sup_residual,
                                    std::abs(last.values[i] - (rhs[i] - neg[i])));
    }
    // Composite quadrature estimate: trapezoid aliasing of the width-sqrt(h)
    // per-step kernels, band truncation, and rounding accumulated over the
    // scatter chains (counted for the propagation and for the residual terms).
    const double eps = std::numeric_limits<double>::epsilon();
    const double aliasing = 2.0 * std::exp(-2.0 * M_PI * M_PI * h / (grid.delta * grid.delta));
    const double trunc = 2.0 * std::erfc(BAND_SIGMAS / std::sqrt(2.0));
    rep.budget = rho_max * p.n * (aliasing + trunc + 8.0 * grid.n * eps) +
                 std::abs(last.tail_defect) * rho_max;
    return rep;
}

double empirical_gaussian_bound(const GridDensity& gd, const Vec& x, double c) {
    if (!(c > 1.0)) throw std::invalid_argument("empirical_gaussian_bound: c > 1 required");
    double best = 0.0;
    if (gd.d == 1) {
        for (int i = 0; i < gd.axis.n; ++i)
            best = std::max(best, gd.values[i] /
                                      gauss::density(1, c, gd.t, Vec{gd.axis.point(i) - x[0]}));
    } else {
        Vec z(2);
        for (int ix = 0; ix < gd.axis.n; ++ix) {
            z[0] = gd.axis.point(ix) - x[0];
            for (int iy = 0; iy < gd.axis.n; ++iy) {
                z[1] = gd.axis.point(iy) - x[1];
                best = std::max(best, gd.values[static_cast<std::size_t>(ix) * gd.axis.n + iy] /
                                          gauss::density(2, c, gd.t, z));
            }
        }
    }
    return best;
}

double holder_time_modulus(const SchemeParams& p, const Grid& grid, int M,
                           int k, int l, double t, double c) {
    if (p.dim() != 1) throw std::invalid_argument("holder_time_modulus: d = 1 only");
    if (!(l > k)) throw std::invalid_argument("holder_time_modulus: l > k required");
    const double tk = k * p.T / p.n, tl = l * p.T / p.n;
    if (t < tl || t > (l + 1) * p.T / p.n + 1e-12)
        throw std::invalid_argument("holder_time_modulus: t in [t_l, t_{l+1}]");
    if (t == tl) return 0.0;
    const double alpha = p.drift.condition().alpha;
    const std::vector<GridDensity> seq = propagate(p, grid, M, k);
    const GridDensity& at_l = seq.at(l - 1 - k);
    const GridDensity at_t = density_at(p, seq, k, t, M);
    const double scale = std::pow((t - tl) / (tl - tk), 0.5 * alpha);
    double best = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double den = scale * gauss::density(1, c, t - tk, Vec{grid.point(i) - p.x[0]});
        best = std::max(best, std::abs(at_t.values[i] - at_l.values[i]) / den);
    }
    return best;
}

double cdf_at(const GridDensity& gd, double y) {
    if (gd.d != 1) throw std::invalid_argument("cdf_at: d = 1 only");
    const Grid& g = gd.axis;
    if (y <= g.lo) return 0.0;
    double c = 0.0;
    for (int i = 1; i < g.n; ++i) {
        const double yi = g.point(i);
        if (y < yi) {
            const double f = (y - g.point(i - 1)) / g.delta;
            const double vmid = gd.values[i - 1] + f * (gd.values[i] - gd.values[i - 1]);
            return c + 0.5 * (gd.values[i - 1] + vmid) * (y - g.point(i - 1));
        }
        c += 0.5 * (gd.values[i - 1] + gd.values[i]) * g.delta;
    }
    return c;
}

double ks_statistic(const GridDensity& gd, std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    // cumulative trapezoid once, then walk the sorted sample
    const Grid& g = gd.axis;
    std::vector<double> cum(g.n, 0.0);
    for (int i = 1; i < g.n; ++i)
        cum[i] = cum[i - 1] + 0.5 * (gd.values[i - 1] + gd.values[i]) * g.delta;
    auto F = [&](double y) {
        if (y <= g.lo) return 0.0;
        if (y >= g.hi()) return cum[g.n - 1];
        const int i = static_cast<int>((y - g.lo) / g.delta);
        const double y0 = g.point(i);
        const double f = (y - y0) / g.delta;
        const double vmid = gd.values[i] + f * (gd.values[i + 1] - gd.values[i]);
        return cum[i] + 0.5 * (gd.values[i] + vmid) * (y - y0);
    };
    const double N = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double fy = F(samples[i]);
        d = std::max(d, std::max((i + 1) / N - fy, fy - i / N));
    }
    return d;
}

double abs_moment(const GridDensity& gd, int order) {
    if (gd.d != 1) throw std::invalid_argument("abs_moment: d = 1 only");
    double m = 0.0;
    for (int i = 0; i < gd.axis.n; ++i)
        m += gd.axis.weight(i) * std::pow(std::abs(gd.axis.point(i)), order) * gd.values[i];
    return m;
}

void write_csv(std::ostream& os, const GridDensity& gd,
               const std::vector<std::pair<std::string, std::string>>& metadata) {
    char buf[64];
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", gd.t);
    os << "# t: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", gd.mass);
    os << "# mass: " << buf << "\n";
    if (gd.d == 1) {
        os << "y,gamma\n";
        for (int i = 0; i < gd.axis.n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", gd.axis.point(i));
            os << buf << ",";
            std::snprintf(buf, sizeof buf, "%.17g", gd.values[i]);
            os << buf << "\n";
        }
    } else {
        os << "y1,y2,gamma\n";
        for (int ix = 0; ix < gd.axis.n; ++ix)
            for (int iy = 0; iy < gd.axis.n; ++iy) {
                std::snprintf(buf, sizeof buf, "%.17g", gd.axis.point(ix));
                os << buf << ",";
                std::snprintf(buf, sizeof buf, "%.17g", gd.axis.point(iy));
                os << buf << ",";
                std::snprintf(buf, sizeof buf, "%.17g",
                              gd.values[static_cast<std::size_t>(ix) * gd.axis.n + iy]);
                os << buf << "\n";
            }
    }
}

}  // namespace sdelab::density
