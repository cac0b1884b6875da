#include "sdelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sdelab/gaussian.hpp"

namespace sdelab::analysis {

namespace {

void require_same_frame(const GridDensity& a, const GridDensity& b) {
    if (a.d != b.d || !(a.axis == b.axis) || std::abs(a.t - b.t) > 1e-12)
        throw std::invalid_argument("density pair must share grid and time");
}

}  // namespace

double weighted_sup_error(const GridDensity& num, const GridDensity& ref,
                          const Vec& x, double c) {
    require_same_frame(num, ref);
    if (!(c > 1.0)) throw std::invalid_argument("weighted_sup_error: c > 1 required");
    double best = 0.0;
    if (num.d == 1) {
        for (int i = 0; i < num.axis.n; ++i)
            best = std::max(best,
                            std::abs(num.values[i] - ref.values[i]) /
                                gauss::density(1, c, num.t, Vec{num.axis.point(i) - x[0]}));
    } else {
        Vec z(2);
        for (int ix = 0; ix < num.axis.n; ++ix) {
            z[0] = num.axis.point(ix) - x[0];
            for (int iy = 0; iy < num.axis.n; ++iy) {
                z[1] = num.axis.point(iy) - x[1];
                const std::size_t idx = static_cast<std::size_t>(ix) * num.axis.n + iy;
                best = std::max(best, std::abs(num.values[idx] - ref.values[idx]) /
                                          gauss::density(2, c, num.t, z));
            }
        }
    }
    return best;
}

double tv_error(const GridDensity& num, const GridDensity& ref) {
    require_same_frame(num, ref);
    double s = 0.0;
    if (num.d == 1) {
        for (int i = 0; i < num.axis.n; ++i)
            s += num.axis.weight(i) * std::abs(num.values[i] - ref.values[i]);
    } else {
        for (int ix = 0; ix < num.axis.n; ++ix)
            for (int iy = 0; iy < num.axis.n; ++iy)
                s += num.axis.weight(ix) * num.axis.weight(iy) *
                     std::abs(num.values[static_cast<std::size_t>(ix) * num.axis.n + iy] -
                              ref.values[static_cast<std::size_t>(ix) * num.axis.n + iy]);
    }
    return 0.5 * s;
}

FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 pairs");
    const double n = static_cast<double>(pairs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [h, e] : pairs) {
        if (!(h > 0.0) || !(e > 0.0))
            throw std::invalid_argument("fit_rate: h and error must be positive");
        const double lx = std::log(h), ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    FitResult out;
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
    double rss = 0.0;
    for (const auto& [h, e] : pairs) {
        const double r = std::log(e) - (out.intercept + out.slope * std::log(h));
        rss += r * r;
    }
    out.residual_norm = std::sqrt(rss / n);
    return out;
}

std::string RateReport::to_json() const {
    nlohmann::json j;
    j["variant"] = variant;
    j["drift"] = nlohmann::json::parse(drift_json);
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["residual_norm"] = residual_norm;
    j["alpha_over_2"] = alpha_over_2;
    j["pass"] = pass;
    nlohmann::json pts = nlohmann::json::array();
    for (const RatePoint& p : points)
        pts.push_back({{"n", p.n},
                       {"h", p.h},
                       {"weighted_sup_error", p.weighted_sup},
                       {"tv_error", p.tv}});
    j["points"] = pts;
    return j.dump(2);
}

void RateReport::write_csv(std::ostream& os) const {
    os << "n,h,weighted_sup_error,tv_error\n";
    char buf[96];
    for (const RatePoint& p : points) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", p.n, p.h, p.weighted_sup, p.tv);
        os << buf;
    }
}

void StudyParams::validate() const {
    if (n_list.size() < 3) throw std::invalid_argument("StudyParams: need >= 3 step counts");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("StudyParams: n_list must be strictly increasing");
    for (int n : n_list)
        if (n < 1 || n_ref % n != 0)
            throw std::invalid_argument("StudyParams: n_ref must be a multiple of every n");
    if (n_ref < 16 * n_list.back())
        throw std::invalid_argument("StudyParams: n_ref >= 16 * max(n_list) required");
    if (!(c_weight > 1.0)) throw std::invalid_argument("StudyParams: c_weight > 1 required");
    if (grid_N < 2 || M < 1) throw std::invalid_argument("StudyParams: bad grid/M");
}

RateReport run_rate_study(const StudyParams& sp) {
    sp.validate();
    SchemeParams p = sp.base;
    p.n = sp.n_list.front();
    p.validate();
    double center = 0.0;
    for (double xi : p.x) center += xi;
    center /= p.x.size();
    const density::Grid grid = density::Grid::centered(
        center, sp.L_factor * std::sqrt(p.T) + density::displacement_budget(p.drift, p.T),
        sp.grid_N);

    SchemeParams pr = sp.base;
    pr.n = sp.n_ref;
    const GridDensity ref = density::propagate(pr, grid, sp.M).back();

    RateReport rep;
    rep.variant = sp.base.variant == scheme::Variant::Primary ? "primary" : "zero_first";
    rep.drift_json = sp.base.drift.to_json();
    rep.alpha_over_2 = 0.5 * sp.base.drift.condition().alpha;
    std::vector<std::pair<double, double>> pairs;
    for (int n : sp.n_list) {
        p.n = n;
        const GridDensity gd = density::propagate(p, grid, sp.M).back();
        RatePoint pt;
        pt.n = n;
        pt.h = p.h();
        pt.weighted_sup = weighted_sup_error(gd, ref, p.x, sp.c_weight);
        pt.tv = tv_error(gd, ref);
        rep.points.push_back(pt);
        pairs.emplace_back(pt.h, pt.weighted_sup);
    }
    const FitResult fit = fit_rate(pairs);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.residual_norm = fit.residual_norm;
    rep.pass = rep.slope >= rep.alpha_over_2 - RATE_SLACK;
    return rep;
}

double apply_test_fn(TestFn phi, const Vec& x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    switch (phi) {
        case TestFn::Coordinate: return x[0];
        case TestFn::SquaredNorm: return n2;
        case TestFn::SmoothBump: return n2 < 1.0 ? std::exp(-1.0 / (1.0 - n2)) : 0.0;
        case TestFn::HalfSpace: return x[0] >= 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

WeakErrorEstimate mc_weak_error(const SchemeParams& p, TestFn phi, int n, int n_ref,
                                int samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("mc_weak_error: samples >= 100 required");
    if (n < 1 || n_ref % n != 0)
        throw std::invalid_argument("mc_weak_error: n_ref must be a multiple of n");
    const int m = n_ref / n;
    SchemeParams coarse = p;
    coarse.n = n;
    SchemeParams fine = p;
    fine.n = n_ref;
    coarse.validate();

    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < samples; ++i) {
        const std::uint64_t stream = static_cast<std::uint64_t>(i);
        const double dc = apply_test_fn(phi, scheme::simulate_terminal(coarse, seed, stream, m));
        const double df = apply_test_fn(phi, scheme::simulate_terminal(fine, seed, stream, 1));
        const double d = dc - df;
        sum += d;
        sumsq += d * d;
    }
    WeakErrorEstimate out;
    out.samples = samples;
    out.estimate = sum / samples;
    const double var = std::max(0.0, (sumsq - sum * sum / samples) / (samples - 1));
    out.std_error = std::sqrt(var / samples);
    out.ci_low = out.estimate - 1.959963984540054 * out.std_error;
    out.ci_high = out.estimate + 1.959963984540054 * out.std_error;
    return out;
}

void GronwallInput::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("GronwallInput: T > 0");
    if (which == Case::I) {
        if (!(beta_tilde < 1.0) || !(beta > beta_tilde - 1.0))
            throw std::invalid_argument("GronwallInput case I: beta_tilde < 1, beta > beta_tilde - 1");
        if (!(eta > 0.0) || delta < 0.0)
            throw std::invalid_argument("GronwallInput case I: eta > 0, delta >= 0");
    } else {
        if (!(beta_tilde < 1.0) || !(beta_hat < 1.0) ||
            !(beta_check > beta_tilde + beta_hat - 1.0))
            throw std::invalid_argument(
                "GronwallInput case II: beta_tilde, beta_hat < 1, beta_check > beta_tilde + beta_hat - 1");
        if (!(a > 0.0) || b < 0.0)
            throw std::invalid_argument("GronwallInput case II: a > 0, b >= 0");
    }
}

namespace {

double case1_constant(double bt, double beta, double eta, double delta, double T) {
    if (delta == 0.0) return eta;
    double K = eta * std::exp(delta * std::pow(T, 1.0 + beta - bt) /
                              (1.0 + std::min(beta, 0.0) - bt));
    // small-time refinement from the Remark
    const double w = std::pow((1.0 - bt) / delta, 1.0 / (beta + 1.0 - bt));
    if (T < w)
        K = std::min(K, eta * (1.0 - bt) /
                            (1.0 - bt - delta * std::pow(T, beta + 1.0 - bt)));
    return K;
}

}  // namespace

double gronwall_constant(const GronwallInput& in) {
    in.validate();
    if (in.which == GronwallInput::Case::I)
        return case1_constant(in.beta_tilde, in.beta, in.eta, in.delta, in.T);

    const double bt = in.beta_tilde, bh = in.beta_hat, bc = in.beta_check;
    double K;
    if (bh <= 0.0) {
        K = case1_constant(bt, bc - bh, in.a, in.b, in.T);
    } else {
        // doubling iteration: each pass squares the kernel gain and lowers
        // the exponent of (t-s) until the kernel is regular, then case I
        const double gamma = 1.0 + bc - bt - bh;
        double an = in.a, bn = in.b;
        int nhat;
        if (bt - bc >= 0.0) {
            nhat = static_cast<int>(std::ceil(std::log2(1.0 + bh / gamma)));
            nhat = std::max(nhat, 1);
            for (int k = 1; k <= nhat; ++k) {
                const double p2 = std::pow(2.0, k - 1);
                const double B = gauss::beta_function(1.0 - bt, 1.0 + (p2 - 1.0) * gamma - bh);
                const double a_next = an + an * bn * std::pow(in.T, p2 * gamma) * B;
                bn = bn * bn * gauss::beta_function(p2 * gamma, 1.0 + (p2 - 1.0) * gamma - bh);
                an = a_next;
            }
        } else {
            nhat = static_cast<int>(std::ceil(-std::log2(1.0 - bh)));
            nhat = std::max(nhat, 1);
            for (int k = 1; k <= nhat; ++k) {
                const double p2 = std::pow(2.0, k - 1);
                const double B = gauss::beta_function(1.0 - bt, p2 * (1.0 - bh));
                const double a_next = an + an * bn * std::pow(in.T, p2 * gamma) * B;
                bn = bn * bn * gauss::beta_function(p2 * (1.0 - bh), p2 * (1.0 - bh));
                an = a_next;
            }
        }
        const double beta = std::pow(2.0, nhat) * gamma + bt - 1.0;
        K = case1_constant(bt, beta, an, bn, in.T);
    }
    // the Remark's case II small-time bound, when T is inside its window
    if (in.b > 0.0) {
        const double gamma = 1.0 + bc - bt - bh;
        const double bB = in.b * gauss::beta_function(1.0 - bt, 1.0 - bh);
        const double w = std::pow(bB, -1.0 / gamma);
        if (in.T < w)
            K = std::min(K, in.a / (1.0 - bB * std::pow(in.T, gamma)));
    }
    return K;
}

double gronwall_small_time(const GronwallInput& in, double t) {
    in.validate();
    if (!(t > 0.0)) throw std::invalid_argument("gronwall_small_time: t > 0");
    if (in.which == GronwallInput::Case::I) {
        const double bt = in.beta_tilde;
        if (in.delta == 0.0) return in.eta;
        const double w = std::pow((1.0 - bt) / in.delta, 1.0 / (in.beta + 1.0 - bt));
        if (!(t < w)) throw std::domain_error("gronwall_small_time: t outside validity window");
        return in.eta * (1.0 - bt) / (1.0 - bt - in.delta * std::pow(t, in.beta + 1.0 - bt));
    }
    const double gamma = 1.0 + in.beta_check - in.beta_tilde - in.beta_hat;
    if (in.b == 0.0) return in.a;
    const double bB = in.b * gauss::beta_function(1.0 - in.beta_tilde, 1.0 - in.beta_hat);
    const double w = std::pow(bB, -1.0 / gamma);
    if (!(t < w)) throw std::domain_error("gronwall_small_time: t outside validity window");
    return in.a / (1.0 - bB * std::pow(t, gamma));
}

GronwallCheck gronwall_numeric_check(const GronwallInput& in, int grid_points, double tol) {
    in.validate();
    if (grid_points < 16) throw std::invalid_argument("gronwall_numeric_check: grid too coarse");
    const bool caseI = in.which == GronwallInput::Case::I;
    const double bt = in.beta_tilde;
    const double bhat = caseI ? 0.0 : in.beta_hat;
    const double base = caseI ? in.eta : in.a;
    const double coef = caseI ? in.delta : in.b;
    const double tpow = caseI ? in.beta : in.beta_check;

    // I(t) = int_0^t f(s) s^{-bt} (t-s)^{-bhat} ds = t^{1-bt-bhat} * sum c_m f(t v_m)
    // with fixed nodes v_m from power substitutions at both endpoints.
    const int half = 128;
    std::vector<double> vn, cn;
    vn.reserve(2 * half);
    cn.reserve(2 * half);
    const double el = 1.0 / (1.0 - bt), er = 1.0 / (1.0 - std::max(bhat, 0.0));
    for (int i = 0; i < half; ++i) {
        const double w = (i + 0.5) / half;
        const double v = 0.5 * std::pow(w, el);
        vn.push_back(v);
        cn.push_back(std::pow(0.5, 1.0 - bt) * el / half * std::pow(1.0 - v, -bhat));
    }
    for (int i = 0; i < half; ++i) {
        const double w = (i + 0.5) / half;
        const double v = 1.0 - 0.5 * std::pow(w, er);
        vn.push_back(v);
        cn.push_back(std::pow(0.5, 1.0 - bhat) * er / half * std::pow(v, -bt));
    }

    // The discrete system is lower triangular in t: every node s = t v_m lies
    // strictly below t, so one forward sweep with the near-diagonal
    // interpolation weight solved implicitly yields the exact fixed point.
    const int G = grid_points;
    const double dt = in.T / G;
    std::vector<double> f(G + 1, base);

    GronwallCheck out;
    out.converged = true;
    for (int j = 1; j <= G; ++j) {
        const double t = j * dt;
        double off = 0.0, diag = 0.0;
        for (std::size_t m = 0; m < vn.size(); ++m) {
            const double u = t * vn[m] / dt;
            int i = static_cast<int>(u);
            i = std::min(i, j - 1);
            const double fr = u - i;
            if (i + 1 == j) {
                off += cn[m] * (1.0 - fr) * f[i];
                diag += cn[m] * fr;
            } else {
                off += cn[m] * (f[i] + fr * (f[i + 1] - f[i]));
            }
        }
        const double pre = coef * std::pow(t, tpow) * std::pow(t, 1.0 - bt - bhat);
        const double denom = 1.0 - pre * diag;
        if (!(denom > 0.0) || !std::isfinite(pre)) {
            out.converged = false;
            break;
        }
        f[j] = (base + pre * off) / denom;
        if (!std::isfinite(f[j])) {
            out.converged = false;
            break;
        }
    }
    out.sup_f = *std::max_element(f.begin(), f.end());
    out.constant = gronwall_constant(in);
    out.satisfied = out.converged && out.sup_f <= out.constant * (1.0 + tol);
    return out;
}

}  // namespace sdelab::analysis
