#pragma once

#include <string>
#include <vector>

#include "sdelab/drift.hpp"
#include "sdelab/exponent.hpp"

namespace sdelab::gauss {

/// g_c(u,x) = (2 pi c u)^{-d/2} exp(-|x|^2 / (2 c u)): density of the
/// centered Gaussian with covariance c u I_d.  Requires u > 0, c >= 1.
double density(int d, double c, double u, const Vec& x);

/// Gradient of x -> g_c(u,x): -x/(cu) g_c(u,x).
Vec grad(int d, double c, double u, const Vec& x);

/// Hessian (row-major d x d): (x x^T/(cu)^2 - I/(cu)) g_c(u,x).
std::vector<double> hess(int d, double c, double u, const Vec& x);

/// Euler B(a,b), a,b > 0, via the log-gamma identity.
double beta_function(double a, double b);

enum class SensitivityInequality { GradBound, TimeDerivBound, SpaceHolder, TimeHolder };

struct SensitivityGrid {
    double u_min = 1e-4;
    double u_max = 1.0;
    int n_u = 64;
    double a_max = 8.0;  // range of |x|/sqrt(u)
    int n_x = 64;
};

/// Empirical constant for the heat-kernel sensitivity bounds: the sup over
/// the sampled grid (d = 1) of the left-hand side divided by the right-hand
/// side with the constant stripped.  `order` restricts the spatial
/// derivative order (-1 takes the sup over 0..2).  The dominating Gaussian
/// is normalized as (2 pi u)^{-1/2} exp(-x^2/(2cu)), i.e. the c^{1/2}
/// prefactor is absorbed into the reported constant.  Requires c > 1.
double sensitivity_constant_search(SensitivityInequality ineq, double c,
                                   const SensitivityGrid& grid = {}, int order = -1);

struct BoundCheckReport {
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double quadrature_error = 0.0;
};

/// Checks the constant-weight Gaussian convolution bound (d = 1):
///   int_s^t du (u-s)^{-beta} (t-u)^{-gamma} int g_c(u-s,z-x) |phi(u,z)| g_c(t-u,y-z) dz
///     <= C ||phi||_{L^q'-L^rho'} g_c(t-s,y-x) (t-s)^{1-1/q'-(beta+gamma+d/(2rho'))}
///        * B(1-qb'(beta+d/(2rho')), 1-qb'(gamma+d/(2rho')))^{1/qb'}
/// with the explicit Holder constant C = (2 pi c)^{-d/(2rho')} rb'^{-d/(2 rb')}
/// (rb', qb' the conjugate exponents).  The left-hand side is computed by
/// nested adaptive quadrature.  Requires the integrability condition
/// (beta + d/(2rho')) v (gamma + d/(2rho')) < 1 - 1/q'.
BoundCheckReport convolution_bound_check(const Exponent& rho_p, const Exponent& q_p,
                                         double beta, double gamma,
                                         const DriftSpec& phi,
                                         double s, double t, double x, double y,
                                         double c = 2.0, double tol = 1e-6);

}  // namespace sdelab::gauss
