#include "sdelab/drift.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sdelab/quadrature.hpp"

namespace sdelab {

namespace {

double norm2(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double surface_area_unit_sphere(int d) {
    // S_{d-1} = 2 pi^{d/2} / Gamma(d/2); S_0 = 2 for d = 1.
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Estimates the power p of an integrand ~ s^{-p} near 0 from two samples.
double estimate_origin_power(const std::function<double(double)>& f) {
    const double a = 1e-6, b = 1e-7;
    const double fa = f(a), fb = f(b);
    if (fa <= 0.0 || fb <= 0.0) return 0.0;
    const double p = std::log(fb / fa) / std::log(a / b);
    return (p > 0.01 && p < 1.0) ? p : 0.0;
}

quad::Result integrate_with_origin_singularity(const std::function<double(double)>& f,
                                               double b, double rtol) {
    const double p = estimate_origin_power(f);
    if (p > 0.0) return quad::power_substitute(f, b, p, rtol);
    return quad::adaptive(f, 0.0, b, rtol);
}

}  // namespace

ConditionReport check_condition(int d, const Exponent& rho, const Exponent& q) {
    if (d < 1) throw std::invalid_argument("check_condition: d >= 1 required");
    ConditionReport r;
    const double gap = d * rho.reciprocal() + 2.0 * q.reciprocal();
    r.threshold_exponent = q.reciprocal() + 0.5 * d * rho.reciprocal();
    if (!(rho >= 2.0)) {
        r.failure_reason = "rho < 2";
        return r;
    }
    if (!(gap < 1.0)) {
        std::ostringstream os;
        os << "d/rho + 2/q = " << gap << " not < 1";
        r.failure_reason = os.str();
        return r;
    }
    r.admissible = true;
    r.alpha = 1.0 - gap;
    return r;
}

DriftSpec DriftSpec::zero(int d, Exponent rho, Exponent q) {
    DriftSpec s;
    s.family_ = DriftFamily::Zero;
    s.d_ = d;
    s.rho_ = rho;
    s.q_ = q;
    return s;
}

DriftSpec DriftSpec::constant(Vec mu, Exponent rho, Exponent q) {
    if (mu.empty()) throw std::invalid_argument("constant drift: empty mu");
    DriftSpec s;
    s.family_ = DriftFamily::Constant;
    s.d_ = static_cast<int>(mu.size());
    s.mu_ = std::move(mu);
    s.rho_ = rho;
    s.q_ = q;
    return s;
}

DriftSpec DriftSpec::bounded_sign(double beta, int d, Exponent rho, Exponent q) {
    if (beta < 0.0) throw std::invalid_argument("bounded_sign: beta >= 0 required");
    DriftSpec s;
    s.family_ = DriftFamily::BoundedSign;
    s.d_ = d;
    s.beta_ = beta;
    s.rho_ = rho;
    s.q_ = q;
    return s;
}

DriftSpec DriftSpec::power_singularity(double theta, double gamma, double radius, int d,
                                       Exponent rho, Exponent q) {
    if (gamma < 0.0 || radius <= 0.0)
        throw std::invalid_argument("power_singularity: gamma >= 0, radius > 0 required");
    if (!rho.is_inf() && gamma * rho.value() >= d)
        throw std::invalid_argument("power_singularity: gamma*rho < d required for L^rho membership");
    if (rho.is_inf() && gamma > 0.0)
        throw std::invalid_argument("power_singularity: unbounded family cannot declare rho = inf");
    DriftSpec s;
    s.family_ = DriftFamily::PowerSingularity;
    s.d_ = d;
    s.theta_ = theta;
    s.gamma_ = gamma;
    s.radius_ = radius;
    s.rho_ = rho;
    s.q_ = q;
    return s;
}

DriftSpec DriftSpec::time_singular(double delta, DriftSpec inner, Exponent q) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("time_singular: delta in (0,1) required");
    if (!q.is_inf() && delta * q.value() >= 1.0)
        throw std::invalid_argument("time_singular: delta*q < 1 required for L^q membership");
    if (q.is_inf())
        throw std::invalid_argument("time_singular: q = inf is incompatible with a time singularity");
    if (!inner.time_homogeneous())
        throw std::invalid_argument("time_singular: inner profile must be time-homogeneous");
    DriftSpec s;
    s.family_ = DriftFamily::TimeSingular;
    s.d_ = inner.dimension();
    s.delta_ = delta;
    s.rho_ = inner.rho();
    s.q_ = q;
    s.inner_ = std::make_shared<const DriftSpec>(std::move(inner));
    return s;
}

DriftSpec DriftSpec::custom(Evaluator eval, int d, Exponent rho, Exponent q) {
    if (!eval) throw std::invalid_argument("custom drift: evaluator required");
    DriftSpec s;
    s.family_ = DriftFamily::Custom;
    s.d_ = d;
    s.custom_ = std::move(eval);
    s.rho_ = rho;
    s.q_ = q;
    return s;
}

bool DriftSpec::time_homogeneous() const {
    switch (family_) {
        case DriftFamily::Zero:
        case DriftFamily::Constant:
        case DriftFamily::BoundedSign:
        case DriftFamily::PowerSingularity:
            return true;
        case DriftFamily::TimeSingular:
            return false;
        case DriftFamily::Custom:
            return false;  // no structural information, assume the worst
    }
    return false;
}

double DriftSpec::time_singularity_power() const {
    return family_ == DriftFamily::TimeSingular ? delta_ : 0.0;
}

Vec DriftSpec::evaluate(double t, const Vec& x) const {
    if (static_cast<int>(x.size()) != d_)
        throw std::invalid_argument("drift evaluate: dimension mismatch");
    switch (family_) {
        case DriftFamily::Zero:
            return Vec(d_, 0.0);
        case DriftFamily::Constant:
            return mu_;
        case DriftFamily::BoundedSign: {
            const double r = norm2(x);
            Vec out(d_, 0.0);
            if (r > 0.0)
                for (int i = 0; i < d_; ++i) out[i] = -beta_ * x[i] / r;
            return out;
        }
        case DriftFamily::PowerSingularity: {
            const double r = norm2(x);
            Vec out(d_, 0.0);
            if (r > 0.0 && r <= radius_) {
                const double scale = theta_ * std::pow(r, -(1.0 + gamma_));
                for (int i = 0; i < d_; ++i) out[i] = scale * x[i];
            }
            return out;
        }
        case DriftFamily::TimeSingular: {
            Vec out = inner_->evaluate(t, x);
            if (t <= 0.0) return Vec(d_, 0.0);  // prescribed value at the singular time
            const double scale = std::pow(t, -delta_);
            for (double& v : out) v *= scale;
            return out;
        }
        case DriftFamily::Custom:
            return custom_(t, x);
    }
    return Vec(d_, 0.0);
}

std::pair<double, Vec> DriftSpec::magnitude_direction(double t, const Vec& x) const {
    if (family_ == DriftFamily::TimeSingular && t <= 0.0) {
        // Direction from the profile, infinite magnitude; the cutoff clamps it.
        Vec dir = inner_->evaluate(0.0, x);
        const double m = norm2(dir);
        if (m == 0.0) return {0.0, Vec(d_, 0.0)};
        for (double& v : dir) v /= m;
        return {std::numeric_limits<double>::infinity(), dir};
    }
    Vec b = evaluate(t, x);
    const double m = norm2(b);
    if (m == 0.0) return {0.0, Vec(d_, 0.0)};
    for (double& v : b) v /= m;
    return {m, b};
}

namespace {

Vec apply_cutoff(const DriftSpec& drift, double threshold, double t, const Vec& x) {
    auto [m, dir] = drift.magnitude_direction(t, x);
    if (m == 0.0) return Vec(drift.dimension(), 0.0);
    const double clamped = std::min(m, threshold);
    for (double& v : dir) v *= clamped;
    return dir;
}

void require_admissible(const DriftSpec& drift) {
    const ConditionReport r = drift.condition();
    if (!r.admissible)
        throw std::invalid_argument("cutoff: inadmissible (d,rho,q): " +
                                    r.failure_reason.value_or("unknown"));
}

}  // namespace

Vec cutoff_primary(const DriftSpec& drift, double h, double B, double t, const Vec& x) {
    if (!(h > 0.0 && B > 0.0)) throw std::invalid_argument("cutoff_primary: h > 0, B > 0 required");
    require_admissible(drift);
    const double e = drift.condition().threshold_exponent;
    return apply_cutoff(drift, B * std::pow(h, -e), t, x);
}

Vec cutoff_zero_first(const DriftSpec& drift, double h, double B, double t, const Vec& x) {
    if (!(h > 0.0 && B > 0.0)) throw std::invalid_argument("cutoff_zero_first: h > 0, B > 0 required");
    require_admissible(drift);
    if (t < h) return Vec(drift.dimension(), 0.0);
    return apply_cutoff(drift, B / std::sqrt(h), t, x);
}

namespace {

/// Spatial norm ||b(t,.)||_{L^rho}, closed form per family.  Returns
/// {value, error, member}; for time-dependent families value is the t = 1
/// profile norm and the caller applies the time factor.
NormResult spatial_norm_profile(const DriftSpec& drift, const Exponent& rho, double t) {
    NormResult out;
    switch (drift.family()) {
        case DriftFamily::Zero:
            out.value = 0.0;
            return out;
        case DriftFamily::Constant: {
            double m = 0.0;
            for (double v : drift.mu()) m += v * v;
            m = std::sqrt(m);
            if (rho.is_inf() || m == 0.0) {
                out.value = m;
            } else {
                out.member = false;
                out.value = std::numeric_limits<double>::infinity();
            }
            return out;
        }
        case DriftFamily::BoundedSign:
            if (rho.is_inf() || drift.beta() == 0.0) {
                out.value = drift.beta();
            } else {
                out.member = false;
                out.value = std::numeric_limits<double>::infinity();
            }
            return out;
        case DriftFamily::PowerSingularity: {
            const int d = drift.dimension();
            const double g = drift.gamma(), R = drift.radius(), th = std::abs(drift.theta());
            if (rho.is_inf()) {
                if (g > 0.0) {
                    out.member = false;
                    out.value = std::numeric_limits<double>::infinity();
                } else {
                    out.value = th;
                }
                return out;
            }
            const double p = rho.value();
            if (g * p >= d) {
                out.member = false;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            const double S = surface_area_unit_sphere(d);
            out.value = th * std::pow(S * std::pow(R, d - g * p) / (d - g * p), 1.0 / p);
            return out;
        }
        case DriftFamily::TimeSingular: {
            NormResult in = spatial_norm_profile(*drift.inner(), rho, t);
            if (!in.member) return in;
            in.value *= std::pow(t, -drift.delta());
            return in;
        }
        case DriftFamily::Custom: {
            // Numeric fallback (d = 1): adaptive quadrature over a truncation
            // window, power-law substitution when an origin singularity is
            // detected.
            if (drift.dimension() != 1)
                throw std::invalid_argument("numeric L^rho norm: only d = 1 supported for custom drifts");
            const double X = 100.0;
            if (rho.is_inf()) {
                double sup = 0.0;
                for (int i = 0; i <= 4096; ++i) {
                    const double x = -X + 2.0 * X * i / 4096.0;
                    Vec b = drift.evaluate(t, Vec{x});
                    sup = std::max(sup, std::abs(b[0]));
                }
                out.value = sup;
                out.error_estimate = sup * 1e-3;
                return out;
            }
            const double p = rho.value();
            auto f = [&](double x) {
                Vec b = drift.evaluate(t, Vec{std::abs(x)});
                return std::pow(std::abs(b[0]), p);
            };
            auto fneg = [&](double x) {
                Vec b = drift.evaluate(t, Vec{-std::abs(x)});
                return std::pow(std::abs(b[0]), p);
            };
            quad::Result rp = integrate_with_origin_singularity(f, X, 1e-9);
            quad::Result rn = integrate_with_origin_singularity(fneg, X, 1e-9);
            const double total = rp.value + rn.value;
            out.value = std::pow(total, 1.0 / p);
            out.error_estimate = total > 0.0
                ? out.value * (rp.error_estimate + rn.error_estimate) / (p * total)
                : 0.0;
            return out;
        }
    }
    return out;
}

}  // namespace

NormResult lq_lrho_norm(const DriftSpec& drift, double T,
                        const Exponent& rho, const Exponent& q) {
    if (!(T > 0.0)) throw std::invalid_argument("lq_lrho_norm: T > 0 required");
    NormResult out;
    const double delta = drift.time_singularity_power();
    if (drift.family() == DriftFamily::Custom && !drift.time_homogeneous()) {
        // Full numeric path in time as well.
        if (q.is_inf()) {
            double sup = 0.0, err = 0.0;
            for (int i = 1; i <= 64; ++i) {
                NormResult s = spatial_norm_profile(drift, rho, T * i / 64.0);
                if (!s.member) return s;
                sup = std::max(sup, s.value);
                err = std::max(err, s.error_estimate);
            }
            out.value = sup;
            out.error_estimate = err;
            return out;
        }
        const double qq = q.value();
        auto f = [&](double t) {
            NormResult s = spatial_norm_profile(drift, rho, t);
            return std::pow(s.value, qq);
        };
        quad::Result r = integrate_with_origin_singularity(f, T, 1e-9);
        out.value = std::pow(r.value, 1.0 / qq);
        out.error_estimate = r.value > 0.0 ? out.value * r.error_estimate / (qq * r.value) : 0.0;
        return out;
    }

    NormResult s = spatial_norm_profile(drift, rho, 1.0);  // profile at t = 1
    if (!s.member) return s;
    if (s.value == 0.0) return s;
    if (delta == 0.0) {
        out.value = q.is_inf() ? s.value : s.value * std::pow(T, q.reciprocal());
        out.error_estimate = s.error_estimate;
        return out;
    }
    // ||b(t,.)||_rho = t^{-delta} * profile.
    if (q.is_inf()) {
        out.member = false;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    const double qq = q.value();
    if (delta * qq >= 1.0) {
        out.member = false;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = s.value * std::pow(std::pow(T, 1.0 - delta * qq) / (1.0 - delta * qq), 1.0 / qq);
    out.error_estimate = s.error_estimate;
    return out;
}

NormResult lq_lrho_norm(const DriftSpec& drift, double T) {
    return lq_lrho_norm(drift, T, drift.rho(), drift.q());
}

double default_cutoff_constant(const DriftSpec& drift, double T) {
    switch (drift.family()) {
        case DriftFamily::Zero:
            return 1.0;
        case DriftFamily::Constant:
        case DriftFamily::BoundedSign: {
            NormResult n = lq_lrho_norm(drift, T, Exponent::inf(), Exponent::inf());
            return n.value > 0.0 ? n.value : 1.0;
        }
        default:
            return 1.0;
    }
}

std::string DriftSpec::to_json() const {
    nlohmann::json j;
    auto exp_json = [](const Exponent& e) -> nlohmann::json {
        if (e.is_inf()) return "inf";
        return e.value();
    };
    j["d"] = d_;
    j["rho"] = exp_json(rho_);
    j["q"] = exp_json(q_);
    nlohmann::json p;
    switch (family_) {
        case DriftFamily::Zero:
            j["family"] = "zero";
            break;
        case DriftFamily::Constant:
            j["family"] = "constant";
            p["mu"] = mu_;
            break;
        case DriftFamily::BoundedSign:
            j["family"] = "bounded_sign";
            p["beta"] = beta_;
            break;
        case DriftFamily::PowerSingularity:
            j["family"] = "power_singularity";
            p["theta"] = theta_;
            p["gamma"] = gamma_;
            p["radius"] = radius_;
            break;
        case DriftFamily::TimeSingular:
            j["family"] = "time_singular";
            p["delta"] = delta_;
            p["inner"] = nlohmann::json::parse(inner_->to_json());
            break;
        case DriftFamily::Custom:
            throw std::invalid_argument("custom drifts are not serializable");
    }
    j["params"] = p;
    return j.dump();
}

DriftSpec DriftSpec::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    auto exp_of = [](const nlohmann::json& v) -> Exponent {
        if (v.is_string()) {
            if (v.get<std::string>() == "inf") return Exponent::inf();
            throw std::invalid_argument("exponent: expected number or \"inf\"");
        }
        return Exponent(v.get<double>());
    };
    const std::string fam = j.at("family").get<std::string>();
    const int d = j.at("d").get<int>();
    const Exponent rho = exp_of(j.at("rho"));
    const Exponent q = exp_of(j.at("q"));
    const nlohmann::json p = j.value("params", nlohmann::json::object());
    if (fam == "zero") return zero(d, rho, q);
    if (fam == "constant") return constant(p.at("mu").get<Vec>(), rho, q);
    if (fam == "bounded_sign") return bounded_sign(p.at("beta").get<double>(), d, rho, q);
    if (fam == "power_singularity")
        return power_singularity(p.at("theta").get<double>(), p.at("gamma").get<double>(),
                                 p.at("radius").get<double>(), d, rho, q);
    if (fam == "time_singular")
        return time_singular(p.at("delta").get<double>(),
                             from_json(p.at("inner").dump()), q);
    throw std::invalid_argument("unknown drift family: " + fam);
}

}  // namespace sdelab
