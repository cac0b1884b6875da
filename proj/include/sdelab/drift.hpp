#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdelab/exponent.hpp"

namespace sdelab {

using Vec = std::vector<double>;

enum class DriftFamily { Zero, Constant, BoundedSign, PowerSingularity, TimeSingular, Custom };

/// Admissibility report for the exponent pair (rho, q) in dimension d.
struct ConditionReport {
    bool admissible = false;
    double alpha = 0.0;                // 1 - (d/rho + 2/q), meaningful when admissible
    double threshold_exponent = 0.0;   // 1/q + d/(2 rho)
    std::optional<std::string> failure_reason;
};

ConditionReport check_condition(int d, const Exponent& rho, const Exponent& q);

/// A drift coefficient b(t,x) from one of the built-in families, together
/// with its dimension and declared integrability exponents.
class DriftSpec {
public:
    using Evaluator = std::function<Vec(double, const Vec&)>;

    static DriftSpec zero(int d, Exponent rho = Exponent::inf(), Exponent q = Exponent::inf());
    static DriftSpec constant(Vec mu, Exponent rho = Exponent::inf(), Exponent q = Exponent::inf());
    /// b(t,x) = -beta x/|x| (0 at the origin): bounded, discontinuous, odd.
    static DriftSpec bounded_sign(double beta, int d,
                                  Exponent rho = Exponent::inf(), Exponent q = Exponent::inf());
    /// b(t,x) = theta x/|x|^{1+gamma} for 0 < |x| <= radius, 0 elsewhere.
    static DriftSpec power_singularity(double theta, double gamma, double radius, int d,
                                       Exponent rho, Exponent q = Exponent::inf());
    /// b(t,x) = t^{-delta} inner(t,x) with a bounded spatial profile `inner`.
    static DriftSpec time_singular(double delta, DriftSpec inner, Exponent q);
    static DriftSpec custom(Evaluator eval, int d, Exponent rho, Exponent q);

    DriftFamily family() const { return family_; }
    int dimension() const { return d_; }
    const Exponent& rho() const { return rho_; }
    const Exponent& q() const { return q_; }
    ConditionReport condition() const { return check_condition(d_, rho_, q_); }

    bool time_homogeneous() const;
    /// Exponent p such that |b(t,x)| ~ t^{-p} as t->0 (0 for regular-in-time
    /// families); drives the power-law substitution in time quadratures.
    double time_singularity_power() const;

    /// b(t,x); singular points (the spatial origin of PowerSingularity, t=0 of
    /// TimeSingular) get the prescribed value 0.
    Vec evaluate(double t, const Vec& x) const;
    /// |b(t,x)| and the unit direction (zero vector when b = 0).  The
    /// magnitude may be +inf for TimeSingular at small t; callers clamp.
    std::pair<double, Vec> magnitude_direction(double t, const Vec& x) const;

    double beta() const { return beta_; }
    double theta() const { return theta_; }
    double gamma() const { return gamma_; }
    double radius() const { return radius_; }
    double delta() const { return delta_; }
    const Vec& mu() const { return mu_; }
    const DriftSpec* inner() const { return inner_.get(); }

    std::string to_json() const;
    static DriftSpec from_json(const std::string& text);

private:
    DriftSpec() = default;

    DriftFamily family_ = DriftFamily::Zero;
    int d_ = 1;
    Exponent rho_ = Exponent::inf();
    Exponent q_ = Exponent::inf();
    Vec mu_;
    double beta_ = 0.0;
    double theta_ = 0.0, gamma_ = 0.0, radius_ = 0.0;
    double delta_ = 0.0;
    std::shared_ptr<const DriftSpec> inner_;
    Evaluator custom_;
};

/// b_h of the primary scheme: magnitude clamped at B h^{-(1/q + d/(2 rho))},
/// direction preserved.  Rejects inadmissible (d, rho, q).
Vec cutoff_primary(const DriftSpec& drift, double h, double B, double t, const Vec& x);

/// Alternative cutoff: zero on [0,h), clamped at B h^{-1/2} afterwards.
Vec cutoff_zero_first(const DriftSpec& drift, double h, double B, double t, const Vec& x);

struct NormResult {
    double value = 0.0;           // +inf when the drift is not in L^q-L^rho
    double error_estimate = 0.0;  // 0 for closed forms
    bool member = true;
};

/// Nested L^q([0,T], L^rho(R^d)) norm at the declared exponents.
NormResult lq_lrho_norm(const DriftSpec& drift, double T);
/// Same norm evaluated at arbitrary exponents (used by the lemma checks).
NormResult lq_lrho_norm(const DriftSpec& drift, double T,
                        const Exponent& rho, const Exponent& q);

/// Default cutoff constant: the L^inf-L^inf norm for bounded families
/// (so the cutoff is inactive), 1 otherwise.
double default_cutoff_constant(const DriftSpec& drift, double T);

}  // namespace sdelab
