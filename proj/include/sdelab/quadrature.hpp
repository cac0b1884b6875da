#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace sdelab::quad {

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Adaptive Simpson on [a,b] with relative tolerance `rtol`.
/// The integrand must be finite on the open interval; endpoint singularities
/// should be removed by substitution before calling (see power_substitute).
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rtol = 1e-10, int max_depth = 48);

/// Nodes/weights of an n-point Gauss-Legendre rule on [a,b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

/// Integrates f over [0,b] where f(s) ~ s^{-p} near 0 with p in [0,1),
/// via the substitution s = b v^{1/(1-p)} which removes the singularity.
Result power_substitute(const std::function<double(double)>& f, double b,
                        double p, double rtol = 1e-10);

/// Midpoint nodes s_m and weights w_m (summing to 1) for averaging a
/// function of s over [0,h].  When `time_power` > 0, nodes are placed by the
/// substitution s = h v^{1/(1-time_power)} so that an s^{-time_power}
/// integrand becomes smooth.
void randomization_nodes(int m, double h, double time_power,
                         std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace sdelab::quad
