#include <doctest.h>

#include <cmath>

#include "sdelab/drift.hpp"

using namespace sdelab;

TEST_SUITE_BEGIN("drift");

TEST_CASE("admissibility condition") {
    const auto ok = check_condition(1, Exponent(2.4), Exponent::inf());
    CHECK(ok.admissible);
    CHECK(ok.alpha == doctest::Approx(1.0 - 1.0 / 2.4).epsilon(1e-14));
    CHECK(ok.threshold_exponent == doctest::Approx(1.0 / 4.8).epsilon(1e-14));

    CHECK_FALSE(check_condition(3, Exponent(2.0), Exponent::inf()).admissible);
    CHECK_FALSE(check_condition(1, Exponent(1.5), Exponent::inf()).admissible);  // rho >= 2
    CHECK_FALSE(check_condition(1, Exponent::inf(), Exponent(2.0)).admissible);  // 2/q = 1
    CHECK(check_condition(1, Exponent::inf(), Exponent(3.0)).admissible);
    CHECK(check_condition(2, Exponent::inf(), Exponent::inf()).admissible);
}

TEST_CASE("bounded sign evaluation") {
    const auto b = DriftSpec::bounded_sign(1.5, 1);
    CHECK(b.evaluate(0.0, {2.0}) == Vec{-1.5});
    CHECK(b.evaluate(0.7, {-0.3}) == Vec{1.5});
    CHECK(b.evaluate(0.7, {0.0}) == Vec{0.0});
    CHECK(b.time_homogeneous());
    CHECK(b.time_singularity_power() == 0.0);
}

TEST_CASE("power singularity evaluation") {
    const auto b = DriftSpec::power_singularity(1.0, 0.4, 1.0, 1, Exponent(2.4));
    // |b(x)| = |x|^{-gamma} inside the ball: 0.5^{-0.4} = 2^{0.4}
    const Vec v = b.evaluate(0.0, {0.5});
    CHECK(v[0] == doctest::Approx(std::pow(2.0, 0.4)).epsilon(1e-14));
    CHECK(v[0] == doctest::Approx(1.3195079107728942).epsilon(1e-14));
    CHECK(b.evaluate(0.0, {-0.5})[0] == doctest::Approx(-1.3195079107728942).epsilon(1e-14));
    CHECK(b.evaluate(0.0, {2.0}) == Vec{0.0});  // outside the ball
    CHECK(b.evaluate(0.0, {0.0}) == Vec{0.0});  // prescribed value at the origin
}

TEST_CASE("time singular evaluation") {
    const auto b = DriftSpec::time_singular(0.3, DriftSpec::bounded_sign(1.0, 1), Exponent(3.0));
    const double t = 0.2;
    CHECK(b.evaluate(t, {1.0})[0] == doctest::Approx(-std::pow(t, -0.3)).epsilon(1e-14));
    CHECK_FALSE(b.time_homogeneous());
    CHECK(b.time_singularity_power() == 0.3);
}

TEST_CASE("nested norms") {
    SUBCASE("bounded sign: L^inf-L^inf = beta") {
        const auto r = lq_lrho_norm(DriftSpec::bounded_sign(1.5, 1), 1.0);
        CHECK(r.member);
        CHECK(r.value == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("power singularity: rho-norm in closed form") {
        // (2 theta^rho R^{1-gamma rho}/(1-gamma rho))^{1/rho} = sqrt(10)
        const auto b = DriftSpec::power_singularity(1.0, 0.4, 1.0, 1, Exponent(2.0));
        const auto r = lq_lrho_norm(b, 1.0);
        CHECK(r.member);
        CHECK(r.value == doctest::Approx(3.1622776601683795).epsilon(1e-10));
    }
    SUBCASE("time singular: q-norm of t^{-delta}") {
        // (int_0^1 t^{-0.9} dt)^{1/3} = 10^{1/3}
        const auto b =
            DriftSpec::time_singular(0.3, DriftSpec::bounded_sign(1.0, 1), Exponent(3.0));
        const auto r = lq_lrho_norm(b, 1.0);
        CHECK(r.member);
        CHECK(r.value == doctest::Approx(2.154434690031884).epsilon(1e-10));
    }
    SUBCASE("declared exponents that diverge are flagged") {
        // gamma rho = 2 >= 1: not in L^5
        const auto b = DriftSpec::power_singularity(1.0, 0.4, 1.0, 1, Exponent(2.4));
        const auto r = lq_lrho_norm(b, 1.0, Exponent(5.0), Exponent::inf());
        CHECK_FALSE(r.member);
    }
}

TEST_CASE("cutoff thresholds and direction") {
    SUBCASE("primary exponent 1/q + d/(2 rho)") {
        // rho=inf, q=2.999.. use q=3,d=1? threshold exponent 1/3: h=0.1 -> 10^{1/3}
        const auto b =
            DriftSpec::time_singular(0.3, DriftSpec::constant({5.0}), Exponent(3.0));
        const Vec v = cutoff_primary(b, 0.1, 1.0, 1e-12, {0.0});
        CHECK(v[0] == doctest::Approx(2.154434690031884).epsilon(1e-12));
    }
    SUBCASE("zero-first exponent 1/2") {
        const auto b = DriftSpec::constant({5.0});
        CHECK(cutoff_zero_first(b, 0.1, 1.0, 0.05, {0.0}) == Vec{0.0});  // t < h
        const Vec v = cutoff_zero_first(b, 0.1, 1.0, 0.3, {0.0});
        CHECK(v[0] == doctest::Approx(3.1622776601683795).epsilon(1e-12));
    }
    SUBCASE("inactive below threshold") {
        const auto b = DriftSpec::bounded_sign(0.5, 1);
        CHECK(cutoff_primary(b, 0.1, 1.0, 0.0, {1.0}) == Vec{-0.5});
    }
    SUBCASE("direction preserved in d=2") {
        const auto b = DriftSpec::constant({3.0, 4.0});  // |b| = 5
        const Vec v = cutoff_primary(b, 0.25, 1.0, 0.0, {0.0, 0.0});
        const double m = std::hypot(v[0], v[1]);
        CHECK(m == doctest::Approx(1.0).epsilon(1e-12));  // clamp at B h^0 = 1
        CHECK(v[0] / m == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(v[1] / m == doctest::Approx(0.8).epsilon(1e-12));
    }
}

TEST_CASE("json round trip") {
    const auto specs = {
        DriftSpec::zero(2),
        DriftSpec::constant({1.0, -2.0}),
        DriftSpec::bounded_sign(0.7, 1),
        DriftSpec::power_singularity(1.0, 0.4, 1.0, 1, Exponent(2.4)),
        DriftSpec::time_singular(0.3, DriftSpec::bounded_sign(1.0, 1), Exponent(3.0)),
    };
    for (const auto& b : specs) {
        const auto b2 = DriftSpec::from_json(b.to_json());
        CHECK(b2.to_json() == b.to_json());
        CHECK(b2.dimension() == b.dimension());
        const Vec x(b.dimension(), 0.37);
        CHECK(b2.evaluate(0.21, x) == b.evaluate(0.21, x));
    }
}

TEST_CASE("default cutoff constant") {
    CHECK(default_cutoff_constant(DriftSpec::bounded_sign(1.5, 1), 1.0) == doctest::Approx(1.5));
    CHECK(default_cutoff_constant(
              DriftSpec::power_singularity(1.0, 0.4, 1.0, 1, Exponent(2.4)), 1.0) == 1.0);
}

TEST_SUITE_END();
