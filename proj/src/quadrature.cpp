#include "sdelab/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdelab::quad {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double fa, double fm, double fb, double whole, double tol,
           double tol_floor, double rtol, int depth, int max_depth, Result& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth >= max_depth) {
        out.value += left + right + delta / 15.0;
        out.error_estimate += std::abs(delta) / 15.0;
        out.converged = false;
        return;
    }
    // The locally relative criterion keeps features the seeding pass missed
    // (so tol is near zero) from forcing a full-depth, full-width tree.
    const double accept =
        std::max({tol, tol_floor, rtol * std::abs(left + right)});
    if (std::abs(delta) <= 15.0 * accept) {
        out.value += left + right + delta / 15.0;
        out.error_estimate += std::abs(delta) / 15.0;
        return;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, tol_floor, rtol, depth + 1, max_depth, out);
    adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, tol_floor, rtol, depth + 1, max_depth, out);
}

}  // namespace

Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rtol, int max_depth) {
    Result out;
    if (a == b) return out;
    // Composite seeding: 16 panels give a robust scale estimate even when a
    // single Simpson pass would straddle a narrow feature, and bound the
    // recursion cost through the per-level tolerance halving.
    constexpr int P = 16;
    double fs[2 * P + 1];
    for (int i = 0; i <= 2 * P; ++i) fs[i] = f(a + (b - a) * i / (2.0 * P));
    double scale = 0.0;
    const double w = (b - a) / P;
    for (int p = 0; p < P; ++p)
        scale += std::abs(simpson(fs[2 * p], fs[2 * p + 1], fs[2 * p + 2],
                                  a + p * w, a + (p + 1) * w));
    scale = std::max(scale, 1e-300);
    // tol_floor keeps round-off-level oscillations from forcing full-depth
    // subdivision when the seeded scale underestimates the true integral
    const double tol_floor = 1e-17 * scale;
    for (int p = 0; p < P; ++p) {
        const double pa = a + p * w, pb = a + (p + 1) * w;
        const double whole = simpson(fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], pa, pb);
        adapt(f, pa, pb, fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], whole,
              rtol * scale / P, tol_floor, rtol, 0, max_depth, out);
    }
    return out;
}

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on Legendre polynomials, standard Golub-Welsch-free form.
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid - half * nodes[i];
        weights[i] *= half;
    }
    std::sort(nodes.begin(), nodes.end());
}

Result power_substitute(const std::function<double(double)>& f, double b,
                        double p, double rtol) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("power_substitute: p in [0,1) required");
    const double e = 1.0 / (1.0 - p);
    // s = b v^e, ds = b e v^{e-1} dv ; f(s) s^p stays bounded.
    auto g = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double s = b * std::pow(v, e);
        return f(s) * b * e * std::pow(v, e - 1.0);
    };
    return adaptive(g, 0.0, 1.0, rtol);
}

void randomization_nodes(int m, double h, double time_power,
                         std::vector<double>& nodes, std::vector<double>& weights) {
    if (m < 1) throw std::invalid_argument("randomization_nodes: m >= 1 required");
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    if (time_power <= 0.0) {
        for (int i = 0; i < m; ++i) {
            nodes[i] = h * (i + 0.5) / m;
            weights[i] = 1.0 / m;
        }
        return;
    }
    const double e = 1.0 / (1.0 - time_power);
    double wsum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = (i + 0.5) / m;
        nodes[i] = h * std::pow(v, e);
        weights[i] = e * std::pow(v, e - 1.0) / m;
        wsum += weights[i];
    }
    // Normalized so the discrete mixture stays a probability average.
    for (double& w : weights) w /= wsum;
}

}  // namespace sdelab::quad
