#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdelab/density.hpp"

namespace sdelab::analysis {

using density::GridDensity;
using scheme::SchemeParams;

/// max over the grid of |num - ref| / g_c(t, . - x); densities must share
/// grid and time; c > 1.
double weighted_sup_error(const GridDensity& num, const GridDensity& ref,
                          const Vec& x, double c);

/// Total variation distance (1/2) int |num - ref|.
double tv_error(const GridDensity& num, const GridDensity& ref);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;      // log-space intercept
    double residual_norm = 0.0;  // RMS of log-space residuals
};

/// Least-squares fit of log(error) against log(h); needs >= 3 pairs with
/// positive errors.
FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct RatePoint {
    int n = 0;
    double h = 0.0;
    double weighted_sup = 0.0;
    double tv = 0.0;
};

struct RateReport {
    std::string variant;
    std::string drift_json;
    std::vector<RatePoint> points;  // sorted by n ascending
    double slope = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;
    double alpha_over_2 = 0.0;
    bool pass = false;  // slope >= alpha/2 - slack

    std::string to_json() const;
    void write_csv(std::ostream& os) const;
};

inline constexpr double RATE_SLACK = 0.1;

struct StudyParams {
    SchemeParams base;       // n field ignored; replaced per run
    std::vector<int> n_list; // strictly increasing
    int n_ref = 0;           // multiple of every n, >= 16 * max(n_list)
    int grid_N = 2048;
    double L_factor = 8.0;  // grid half-width L = L_factor sqrt(T) + drift budget
    int M = 16;
    double c_weight = 2.0;
    void validate() const;
};

/// Full rate study: one shared grid, one reference propagation at n_ref,
/// one propagation per n, then the log-log fit.
RateReport run_rate_study(const StudyParams& sp);

enum class TestFn { Coordinate, SquaredNorm, SmoothBump, HalfSpace };
double apply_test_fn(TestFn phi, const Vec& x);

struct WeakErrorEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;   // 95% CLT interval
    double ci_high = 0.0;
    int samples = 0;
};

/// Common-random-numbers estimate of E[phi(X^h_T)] - E[phi(X^{h_ref}_T)]:
/// both schemes share Brownian substreams (coarse increments are sums of
/// fine ones), so n = n_ref gives exactly zero.
WeakErrorEstimate mc_weak_error(const SchemeParams& p, TestFn phi, int n, int n_ref,
                                int samples, std::uint64_t seed);

struct GronwallInput {
    enum class Case { I, II };
    Case which = Case::I;
    // case I: f(t) <= eta + delta t^beta int_0^t f(s) s^{-beta_tilde} ds
    double beta_tilde = 0.0, beta = 0.0, eta = 1.0, delta = 1.0;
    // case II: f(t) <= a + b t^{beta_check} int_0^t f(s) s^{-beta_tilde} (t-s)^{-beta_hat} ds
    double beta_hat = 0.0, beta_check = 0.0, a = 1.0, b = 1.0;
    double T = 1.0;
    void validate() const;
};

/// The lemma constant K with sup f <= K: case I closed form
/// eta exp(delta T^{1+beta-beta_tilde}/(1+min(beta,0)-beta_tilde)); case II by
/// the doubling iteration of (a_n, b_n) with beta functions until the kernel
/// exponent is nonpositive, then case I.  When the small-time bound of the
/// Remark applies at t = T it is taken into the minimum.
double gronwall_constant(const GronwallInput& in);

/// Small-time bound of the Remark at time t; throws when t is outside the
/// validity window.
double gronwall_small_time(const GronwallInput& in, double t);

struct GronwallCheck {
    double sup_f = 0.0;      // sup of the discrete extremal fixed point
    double constant = 0.0;   // gronwall_constant
    bool converged = false;
    bool satisfied = false;  // sup_f <= constant * (1 + tol)
};

/// Iterates the integral inequality with equality on a graded time grid to
/// its minimal fixed point and compares against the constant.
GronwallCheck gronwall_numeric_check(const GronwallInput& in, int grid_points = 4096,
                                     double tol = 1e-4);

}  // namespace sdelab::analysis
