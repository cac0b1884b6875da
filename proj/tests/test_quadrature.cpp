#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sdelab/quadrature.hpp"

using namespace sdelab;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("adaptive simpson on smooth integrands") {
    const auto r = quad::adaptive([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto e = quad::adaptive([](double x) { return std::exp(x); }, 0.0, 2.0);
    CHECK(e.value == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("adaptive simpson resolves a narrow peak") {
    // Gaussian of width 1e-3 inside [0,1]: the composite seeding must find it.
    const double s = 1e-3;
    const auto r = quad::adaptive(
        [=](double x) {
            const double z = (x - 0.3) / s;
            return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
        },
        0.0, 1.0, 1e-10);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("power substitution removes endpoint singularity") {
    // int_0^1 x^{-1/2} dx = 2
    const auto r = quad::power_substitute([](double x) { return 1.0 / std::sqrt(x); }, 1.0, 0.5);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));

    // int_0^2 x^{-0.9} dx = 2^{0.1}/0.1
    const auto q = quad::power_substitute([](double x) { return std::pow(x, -0.9); }, 2.0, 0.9);
    CHECK(q.value == doctest::Approx(std::pow(2.0, 0.1) / 0.1).epsilon(1e-10));
}

TEST_CASE("gauss-legendre exactness") {
    std::vector<double> xs, ws;
    quad::gauss_legendre(5, -1.0, 3.0, xs, ws);
    CHECK(xs.size() == 5);
    // exact for polynomials up to degree 9
    for (int deg : {0, 3, 7, 9}) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * std::pow(xs[i], deg);
        const double exact =
            (std::pow(3.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("randomization nodes") {
    std::vector<double> s, w;
    SUBCASE("regular case: midpoints, uniform weights") {
        quad::randomization_nodes(4, 0.5, 0.0, s, w);
        CHECK(s.size() == 4);
        CHECK(s[0] == doctest::Approx(0.0625));
        CHECK(s[3] == doctest::Approx(0.4375));
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        // averaging a linear function is exact
        double m = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) m += w[i] * (2.0 * s[i] + 1.0);
        CHECK(m == doctest::Approx(2.0 * 0.25 + 1.0).epsilon(1e-14));
    }
    SUBCASE("singular case integrates t^{-p} exactly in the limit") {
        const double h = 0.5, p = 0.3;
        quad::randomization_nodes(64, h, p, s, w);
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
        // (1/h) int_0^h t^{-p} dt = h^{-p}/(1-p); the substitution makes the
        // integrand constant, so the only error is the weight normalization
        double m = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) m += w[i] * std::pow(s[i], -p);
        CHECK(m == doctest::Approx(std::pow(h, -p) / (1.0 - p)).epsilon(1e-3));
        std::vector<double> s2, w2;
        quad::randomization_nodes(256, h, p, s2, w2);
        double m2 = 0.0;
        for (std::size_t i = 0; i < s2.size(); ++i) m2 += w2[i] * std::pow(s2[i], -p);
        const double exact = std::pow(h, -p) / (1.0 - p);
        CHECK(std::abs(m2 - exact) < std::abs(m - exact));
        for (double si : s) CHECK(si > 0.0);
    }
}

TEST_SUITE_END();
