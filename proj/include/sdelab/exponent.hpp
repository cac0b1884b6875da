#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sdelab {

/// Integrability exponent in [1, +inf].  Infinity is a distinguished state,
/// not a large float; formulas that depend on it branch explicitly.
class Exponent {
public:
    Exponent() : value_(1.0), inf_(false) {}
    explicit Exponent(double v) : value_(v), inf_(false) {
        if (!(v > 0.0) || std::isinf(v) || std::isnan(v))
            throw std::invalid_argument("Exponent: finite value must be positive; use Exponent::inf()");
    }
    static Exponent inf() {
        Exponent e;
        e.inf_ = true;
        e.value_ = std::numeric_limits<double>::quiet_NaN();
        return e;
    }

    bool is_inf() const { return inf_; }
    double value() const {
        if (inf_) throw std::logic_error("Exponent: value() on infinite exponent");
        return value_;
    }
    /// 1/p, with the convention 1/inf = 0.
    double reciprocal() const { return inf_ ? 0.0 : 1.0 / value_; }

    bool operator>=(double v) const { return inf_ || value_ >= v; }
    bool operator>(double v) const { return inf_ || value_ > v; }
    bool operator==(const Exponent& o) const {
        if (inf_ || o.inf_) return inf_ && o.inf_;
        return value_ == o.value_;
    }

    std::string str() const { return inf_ ? "inf" : std::to_string(value_); }

private:
    double value_;
    bool inf_;
};

}  // namespace sdelab
