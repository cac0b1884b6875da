#include <doctest.h>

#include <cmath>

#include "sdelab/analysis.hpp"

using namespace sdelab;
using density::Grid;
using density::GridDensity;
using scheme::SchemeParams;

namespace {

SchemeParams base_params(int n, DriftSpec drift, double B = 1.0) {
    SchemeParams p;
    p.T = 1.0;
    p.n = n;
    p.x = Vec(drift.dimension(), 0.0);
    p.B = B;
    p.drift = std::move(drift);
    return p;
}

GridDensity constant_density(const Grid& g, double t, double v) {
    GridDensity gd;
    gd.axis = g;
    gd.t = t;
    gd.values.assign(g.n, v);
    return gd;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("error metrics") {
    const Grid g = Grid::centered(0.0, 1.0, 65);
    auto a = constant_density(g, 1.0, 0.2);
    auto b = constant_density(g, 1.0, 0.5);
    CHECK(analysis::weighted_sup_error(a, a, {0.0}, 2.0) == 0.0);
    CHECK(analysis::tv_error(a, a) == 0.0);
    CHECK(analysis::tv_error(a, b) == doctest::Approx(0.5 * 0.3 * 2.0).epsilon(1e-12));
    CHECK(analysis::tv_error(a, b) == doctest::Approx(analysis::tv_error(b, a)));
    // weighting divides by g_c(t, y-x): the sup is attained at the far edge
    const double w = analysis::weighted_sup_error(a, b, {0.0}, 2.0);
    const double edge = 0.3 / (std::exp(-1.0 / 4.0) / std::sqrt(4.0 * M_PI));
    CHECK(w == doctest::Approx(edge).epsilon(1e-12));
}

TEST_CASE("rate fit recovers exact power laws") {
    std::vector<std::pair<double, double>> pairs;
    for (int k = 3; k < 9; ++k) {
        const double h = std::pow(2.0, -k);
        pairs.push_back({h, 1.7 * std::pow(h, 0.75)});
    }
    const auto r = analysis::fit_rate(pairs);
    CHECK(r.slope == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::exp(r.intercept) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(r.residual_norm < 1e-12);
}

TEST_CASE("small rate study passes for bounded sign") {
    analysis::StudyParams sp;
    sp.base = base_params(16, DriftSpec::bounded_sign(1.0, 1));
    sp.n_list = {16, 32, 64};
    sp.n_ref = 1024;
    sp.grid_N = 1024;
    sp.M = 8;
    const auto rep = analysis::run_rate_study(sp);
    CHECK(rep.pass);
    CHECK(rep.alpha_over_2 == doctest::Approx(0.5));
    CHECK(rep.points.size() == 3);
    CHECK(rep.points[0].weighted_sup > rep.points[2].weighted_sup);
    // report serialization carries the fit
    CHECK(rep.to_json().find("\"slope\"") != std::string::npos);
}

TEST_CASE("test functions") {
    CHECK(analysis::apply_test_fn(analysis::TestFn::Coordinate, {0.3, 9.0}) == 0.3);
    CHECK(analysis::apply_test_fn(analysis::TestFn::SquaredNorm, {3.0, 4.0}) == 25.0);
    CHECK(analysis::apply_test_fn(analysis::TestFn::SmoothBump, {0.0}) ==
          doctest::Approx(std::exp(-1.0)));
    CHECK(analysis::apply_test_fn(analysis::TestFn::SmoothBump, {1.5}) == 0.0);
    CHECK(analysis::apply_test_fn(analysis::TestFn::HalfSpace, {0.2}) == 1.0);
    CHECK(analysis::apply_test_fn(analysis::TestFn::HalfSpace, {-0.2}) == 0.0);
}

TEST_CASE("mc weak error with common random numbers") {
    const auto p = base_params(16, DriftSpec::bounded_sign(1.0, 1));
    SUBCASE("n = n_ref couples to exactly zero") {
        const auto e = analysis::mc_weak_error(p, analysis::TestFn::Coordinate, 16, 16, 200, 3);
        CHECK(e.estimate == 0.0);
        CHECK(e.std_error == 0.0);
    }
    SUBCASE("estimate is reproducible and CI is ordered") {
        const auto a = analysis::mc_weak_error(p, analysis::TestFn::SquaredNorm, 16, 64, 500, 3);
        const auto b = analysis::mc_weak_error(p, analysis::TestFn::SquaredNorm, 16, 64, 500, 3);
        CHECK(a.estimate == b.estimate);
        CHECK(a.ci_low < a.ci_high);
        CHECK(a.ci_low <= a.estimate);
        CHECK(a.estimate <= a.ci_high);
        CHECK(a.samples == 500);
    }
}

TEST_CASE("gronwall constants") {
    analysis::GronwallInput g1;
    g1.which = analysis::GronwallInput::Case::I;
    g1.beta_tilde = 0.0;
    g1.beta = 0.0;
    g1.eta = 2.0;
    g1.delta = 0.5;
    g1.T = 1.0;
    CHECK(analysis::gronwall_constant(g1) ==
          doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-12));

    SUBCASE("monotone in the kernel weight and horizon") {
        analysis::GronwallInput g2;
        g2.which = analysis::GronwallInput::Case::II;
        g2.beta_tilde = 0.2;
        g2.beta_hat = 0.3;
        g2.beta_check = 0.1;
        g2.a = 1.0;
        g2.b = 0.5;
        g2.T = 0.8;
        const double k0 = analysis::gronwall_constant(g2);
        auto gb = g2;
        gb.b = 0.8;
        CHECK(analysis::gronwall_constant(gb) >= k0);
        auto gt = g2;
        gt.T = 1.4;
        CHECK(analysis::gronwall_constant(gt) >= k0);
    }
    SUBCASE("numeric fixed point sits below the constant") {
        analysis::GronwallInput g2;
        g2.which = analysis::GronwallInput::Case::II;
        g2.beta_tilde = 0.4;
        g2.beta_hat = 0.25;
        g2.beta_check = 0.0;
        g2.a = 1.0;
        g2.b = 1.0;
        g2.T = 0.5;
        const auto chk = analysis::gronwall_numeric_check(g2);
        CHECK(chk.converged);
        CHECK(chk.satisfied);
        CHECK(chk.sup_f >= g2.a);
    }
    SUBCASE("small-time bound and its validity window") {
        analysis::GronwallInput g2;
        g2.which = analysis::GronwallInput::Case::II;
        g2.beta_tilde = 0.0;
        g2.beta_hat = 0.5;
        g2.beta_check = 0.0;
        g2.a = 1.0;
        g2.b = 1.0;
        g2.T = 0.04;
        CHECK(analysis::gronwall_small_time(g2, 0.04) ==
              doctest::Approx(5.0 / 3.0).epsilon(1e-12));
        CHECK_THROWS(analysis::gronwall_small_time(g2, 10.0));
    }
}

TEST_SUITE_END();
