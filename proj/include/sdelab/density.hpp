#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdelab/scheme.hpp"

namespace sdelab::density {

using scheme::SchemeParams;

/// Uniform 1-d lattice; d = 2 densities use the same axis for both
/// coordinates.  Quadrature is trapezoid: interior weight delta, edges
/// delta/2.
struct Grid {
    double lo = 0.0;
    double delta = 0.0;
    int n = 0;

    static Grid centered(double center, double L, int N);
    double point(int i) const { return lo + i * delta; }
    double hi() const { return lo + (n - 1) * delta; }
    double weight(int i) const { return (i == 0 || i == n - 1) ? 0.5 * delta : delta; }
    bool operator==(const Grid& o) const {
        return lo == o.lo && delta == o.delta && n == o.n;
    }
};

/// Scheme transition density at a fixed time on a truncated grid.
/// d = 1: values[i] at axis.point(i); d = 2: row-major values[ix*n+iy].
struct GridDensity {
    int d = 1;
    Grid axis;
    double t = 0.0;
    std::vector<double> values;
    double mass = 0.0;
    double tail_defect = 0.0;

    double quad_mass() const;
};

/// Default grid for a run: L = 8 sqrt(T) plus a drift displacement budget.
Grid default_grid(const SchemeParams& p, int N);
double displacement_budget(const DriftSpec& drift, double T);

/// Randomization nodes shared by every density operation: M midpoint nodes
/// over [0,h], power-substituted on the step containing t = 0 when the drift
/// has a time singularity.  Collapses to a single node for time-homogeneous
/// drifts.
void step_nodes(const SchemeParams& p, int k, int M,
                std::vector<double>& s, std::vector<double>& w);

/// One-step mixture density of X^h_t started from the point x at t_k:
/// (1/h) int_0^h g_1(t-t_k, y - x - (t-t_k) b_h(t_k+s, x)) ds.
double first_step_density(const SchemeParams& p, int k, double t,
                          const Vec& x, const Vec& y, int M);

/// Dense one-step kernel matrix (d = 1, test scale): K[iz*n+iy] is the
/// transition density from grid.point(iz) to grid.point(iy) over step k.
struct StepKernel {
    Grid grid;
    std::vector<double> K;
    double row_mass(int iz) const;
};
StepKernel build_step_kernel(const SchemeParams& p, int k, const Grid& grid, int M);

/// Densities at t_{k0+1}..t_n starting from the exact point p.x at t_{k0}.
/// The delta start is consumed by one analytic first step; subsequent steps
/// scatter band-truncated shifted Gaussians under trapezoid quadrature.
/// Aborts (std::runtime_error) when the mass defect exceeds mass_budget.
std::vector<GridDensity> propagate(const SchemeParams& p, const Grid& grid, int M,
                                   int k0 = 0, double mass_budget = 1e-6);

/// Density at an intra-step time t in (t_l, t_{l+1}], from the stored
/// sequence (seq[0] at t_{k0+1}): one partial mixture step from seq[l-1].
GridDensity density_at(const SchemeParams& p, const std::vector<GridDensity>& seq,
                       int k0, double t, int M);

/// Fine-grid stand-in for the diffusion density: the scheme at n_ref steps.
GridDensity reference_density(const SchemeParams& p, int n_ref, const Grid& grid, int M);

struct DuhamelReport {
    double sup_residual = 0.0;
    double budget = 0.0;  // composite quadrature estimate, documented in the impl
};

/// Residual of the Duhamel representation at the final time: the exact
/// in-step time integral collapses each per-step term to a difference of
/// Gaussian convolutions against the stored densities, so a correct
/// propagation leaves pure grid-quadrature error.  d = 1.
DuhamelReport duhamel_residual(const SchemeParams& p, const std::vector<GridDensity>& seq,
                               const Grid& grid, int M);

/// max over the grid of density(y) / g_c(t, y - x); c > 1.
double empirical_gaussian_bound(const GridDensity& gd, const Vec& x, double c);

/// max over the grid of |Gamma(t_k,x,t,y) - Gamma(t_k,x,t_l,y)| divided by
/// ((t-t_l)/(t_l-t_k))^{alpha/2} g_c(t-t_k, y-x); requires t in (t_l, t_{l+1}].
/// Propagates internally from t_k.  d = 1.
double holder_time_modulus(const SchemeParams& p, const Grid& grid, int M,
                           int k, int l, double t, double c);

/// Grid CDF (d = 1, trapezoid cumulative) evaluated by linear interpolation.
double cdf_at(const GridDensity& gd, double y);
/// Two-sided Kolmogorov-Smirnov statistic of samples against the grid CDF.
double ks_statistic(const GridDensity& gd, std::vector<double> samples);
/// E[|Y|^order] under the grid density (d = 1).
double abs_moment(const GridDensity& gd, int order);

/// CSV export: metadata header lines ("# key: value") then y columns and gamma.
void write_csv(std::ostream& os, const GridDensity& gd,
               const std::vector<std::pair<std::string, std::string>>& metadata);

}  // namespace sdelab::density
