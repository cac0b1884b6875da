#include "sdelab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sdelab/quadrature.hpp"

namespace sdelab::gauss {

namespace {

double sqnorm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void check_uc(double u, double c) {
    if (!(u > 0.0)) throw std::invalid_argument("gaussian: u > 0 required");
    if (!(c >= 1.0)) throw std::invalid_argument("gaussian: c >= 1 required");
}

}  // namespace

double density(int d, double c, double u, const Vec& x) {
    check_uc(u, c);
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("gaussian: dimension mismatch");
    const double v = c * u;
    return std::pow(2.0 * M_PI * v, -0.5 * d) * std::exp(-sqnorm(x) / (2.0 * v));
}

Vec grad(int d, double c, double u, const Vec& x) {
    const double g = density(d, c, u, x);
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = -x[i] / (c * u) * g;
    return out;
}

std::vector<double> hess(int d, double c, double u, const Vec& x) {
    const double g = density(d, c, u, x);
    const double v = c * u;
    std::vector<double> out(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out[i * d + j] = (x[i] * x[j] / (v * v) - (i == j ? 1.0 / v : 0.0)) * g;
    return out;
}

double beta_function(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta_function: a, b > 0 required");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

// d = 1 heat kernel g_1 and its closed-form derivatives.
double g1(double u, double x) { return std::exp(-x * x / (2.0 * u)) / std::sqrt(2.0 * M_PI * u); }

double dspace(int k, double u, double x) {
    const double g = g1(u, x);
    switch (k) {
        case 0: return g;
        case 1: return -x / u * g;
        case 2: return (x * x / (u * u) - 1.0 / u) * g;
        default: throw std::invalid_argument("dspace: order 0..2");
    }
}

double dtime_dspace(int k, double u, double x) {
    const double g = g1(u, x);
    const double du = x * x / (2.0 * u * u) - 0.5 / u;  // d/du of log g
    switch (k) {
        case 0: return du * g;
        case 1: return -x * g * (x * x / (2.0 * u * u * u) - 1.5 / (u * u));
        case 2: return g * ((1.0 / (u * u) - 2.0 * x * x / (u * u * u)) +
                            (x * x / (u * u) - 1.0 / u) * du);
        default: throw std::invalid_argument("dtime_dspace: order 0..2");
    }
}

// Dominating envelope (2 pi u)^{-1/2} exp(-x^2/(2cu)).
double envelope(double c, double u, double x) {
    return std::exp(-x * x / (2.0 * c * u)) / std::sqrt(2.0 * M_PI * u);
}

}  // namespace

double sensitivity_constant_search(SensitivityInequality ineq, double c,
                                   const SensitivityGrid& grid, int order) {
    if (!(c > 1.0))
        throw std::invalid_argument("sensitivity_constant_search: c > 1 required (ratio unbounded at c = 1)");
    if (order < -1 || order > 2)
        throw std::invalid_argument("sensitivity_constant_search: order in {-1, 0, 1, 2}");
    std::vector<double> us(grid.n_u), as(grid.n_x);
    for (int i = 0; i < grid.n_u; ++i)
        us[i] = grid.u_min * std::pow(grid.u_max / grid.u_min,
                                      grid.n_u == 1 ? 0.0 : double(i) / (grid.n_u - 1));
    for (int i = 0; i < grid.n_x; ++i)
        as[i] = grid.a_max * double(i) / std::max(1, grid.n_x - 1);

    double sup = 0.0;
    const int k0 = order < 0 ? 0 : order, k1 = order < 0 ? 2 : order;
    for (int k = k0; k <= k1; ++k) {
        for (double u : us) {
            for (double a : as) {
                const double x = a * std::sqrt(u);
                switch (ineq) {
                    case SensitivityInequality::GradBound: {
                        const double lhs = std::abs(dspace(k, u, x));
                        const double rhs = std::pow(u, -0.5 * k) * envelope(c, u, x);
                        sup = std::max(sup, lhs / rhs);
                        break;
                    }
                    case SensitivityInequality::TimeDerivBound: {
                        const double lhs = std::abs(dtime_dspace(k, u, x));
                        const double rhs = std::pow(u, -1.0 - 0.5 * k) * envelope(c, u, x);
                        sup = std::max(sup, lhs / rhs);
                        break;
                    }
                    case SensitivityInequality::SpaceHolder: {
                        for (double a2 : as) {
                            const double x2 = a2 * std::sqrt(u);
                            if (x2 == x) continue;
                            const double lhs = std::abs(dspace(k, u, x) - dspace(k, u, x2));
                            const double num = std::min(std::abs(x - x2), std::sqrt(u));
                            const double rhs = num * std::pow(u, -0.5 * (1 + k)) *
                                               (envelope(c, u, x) + envelope(c, u, x2));
                            sup = std::max(sup, lhs / rhs);
                        }
                        break;
                    }
                    case SensitivityInequality::TimeHolder: {
                        for (double u2 : us) {
                            if (u2 <= u) continue;
                            const double lhs = std::abs(dspace(k, u2, x) - dspace(k, u, x));
                            const double num = std::min(u2 - u, u);
                            const double rhs = num * std::pow(u, -1.0 - 0.5 * k) *
                                               (envelope(c, u, x) + envelope(c, u2, x));
                            sup = std::max(sup, lhs / rhs);
                        }
                        break;
                    }
                }
            }
        }
    }
    return sup;
}

BoundCheckReport convolution_bound_check(const Exponent& rho_p, const Exponent& q_p,
                                         double beta, double gamma,
                                         const DriftSpec& phi,
                                         double s, double t, double x, double y,
                                         double c, double tol) {
    if (!(t > s)) throw std::invalid_argument("convolution_bound_check: t > s required");
    if (!(beta >= 0.0 && gamma >= 0.0))
        throw std::invalid_argument("convolution_bound_check: beta, gamma >= 0 required");
    if (phi.dimension() != 1)
        throw std::invalid_argument("convolution_bound_check: d = 1 only");
    if (!phi.time_homogeneous() && phi.family() != DriftFamily::Zero)
        throw std::invalid_argument("convolution_bound_check: time-homogeneous phi only");
    const int d = 1;
    const double inv_qp = q_p.reciprocal();
    const double half_d_rho = 0.5 * d * rho_p.reciprocal();
    const double pb = beta + half_d_rho, pg = gamma + half_d_rho;
    if (!(std::max(pb, pg) < 1.0 - inv_qp)) {
        std::ostringstream os;
        os << "integrability violated: max(beta,gamma)+d/(2rho') = " << std::max(pb, pg)
           << " not < 1 - 1/q' = " << 1.0 - inv_qp;
        throw std::invalid_argument(os.str());
    }

    BoundCheckReport rep;
    {
        std::ostringstream os;
        os << "rho'=" << rho_p.str() << " q'=" << q_p.str() << " beta=" << beta
           << " gamma=" << gamma << " s=" << s << " t=" << t << " x=" << x << " y=" << y
           << " c=" << c;
        rep.params = os.str();
    }

    const NormResult norm = lq_lrho_norm(phi, t - s, rho_p, q_p);
    if (!norm.member)
        throw std::invalid_argument("convolution_bound_check: phi not in L^q'-L^rho'");

    // RHS with the explicit Holder constant.
    const double qb = 1.0 / (1.0 - inv_qp);  // conjugate of q'
    double holder_c = 1.0;
    if (!rho_p.is_inf()) {
        const double rb = 1.0 / (1.0 - rho_p.reciprocal());
        holder_c = std::pow(2.0 * M_PI * c, -half_d_rho) * std::pow(rb, -0.5 * d / rb);
    }
    const double gts = density(d, c, t - s, Vec{y - x});
    const double bexp = 1.0 - inv_qp - (beta + gamma + half_d_rho);
    rep.rhs = holder_c * norm.value * gts * std::pow(t - s, bexp) *
              std::pow(beta_function(1.0 - qb * pb, 1.0 - qb * pg), 1.0 / qb);

    // LHS by nested quadrature.  The inner convolution is first collapsed
    // with the Gaussian product identity
    //   g_c(a, z-x) g_c(b, y-z) = g_c(a+b, y-x) g_c(ab/(a+b), z-m),
    //   m = (b x + a y)/(a + b),
    // so the remaining z-integral is a naturally scaled Gaussian window
    // against |phi| and the factor g_c(t-s, y-x) comes out exactly.
    auto phival = [&](double z) {
        Vec b = phi.evaluate(0.0, Vec{z});
        return std::abs(b[0]);
    };
    double quad_err = 0.0;
    const double gphi = phi.family() == DriftFamily::PowerSingularity ? phi.gamma() : 0.0;
    auto inner = [&](double u) {  // J(u) = int g_c(v, z-m) |phi(z)| dz
        if (phi.family() == DriftFamily::Zero) return 0.0;
        const double a = u - s, b = t - u;
        const double v = a * b / (t - s);
        const double m = (b * x + a * y) / (t - s);
        const double win = 10.0 * std::sqrt(c * v);
        double lo = m - win, hi = m + win;
        if (phi.family() == DriftFamily::PowerSingularity) {
            lo = std::max(lo, -phi.radius());
            hi = std::min(hi, phi.radius());
        }
        if (hi <= lo) return 0.0;
        auto f = [&](double z) { return density(d, c, v, Vec{z - m}) * phival(z); };
        quad::Result r;
        if (gphi > 0.0 && lo < 0.0 && hi > 0.0) {
            // integrable |z|^{-gamma_phi} singularity at the origin
            quad::Result rp = quad::power_substitute([&](double z) { return f(z); }, hi, gphi, 1e-9);
            quad::Result rn = quad::power_substitute([&](double z) { return f(-z); }, -lo, gphi, 1e-9);
            r.value = rp.value + rn.value;
            r.error_estimate = rp.error_estimate + rn.error_estimate;
        } else {
            r = quad::adaptive(f, lo, hi, 1e-9);
        }
        quad_err += r.error_estimate;
        return r.value;
    };
    // u-integral: endpoint singularities (u-s)^{-pb} and (t-u)^{-pg}, removed
    // by power-law substitutions on the two halves.
    const double mid = 0.5 * (s + t);
    auto left = [&](double v) {  // v = u - s
        const double u = s + v;
        return std::pow(v, -beta) * std::pow(t - u, -gamma) * inner(u);
    };
    auto right = [&](double w) {  // w = t - u
        const double u = t - w;
        return std::pow(u - s, -beta) * std::pow(w, -gamma) * inner(u);
    };
    quad::Result rl = quad::power_substitute(left, mid - s, pb, 1e-8);
    quad::Result rr = quad::power_substitute(right, t - mid, pg, 1e-8);
    rep.lhs = (rl.value + rr.value) * gts;
    rep.quadrature_error = (quad_err + rl.error_estimate + rr.error_estimate) * gts;
    rep.satisfied = rep.lhs <= rep.rhs * (1.0 + tol) + 1e-300;
    return rep;
}

}  // namespace sdelab::gauss
