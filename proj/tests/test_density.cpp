#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sdelab/density.hpp"
#include "sdelab/gaussian.hpp"

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

}  // namespace

TEST_SUITE_BEGIN("density");

TEST_CASE("grid geometry and trapezoid mass") {
    const Grid g = Grid::centered(0.5, 2.0, 101);
    CHECK(g.n == 101);
    CHECK(g.lo == doctest::Approx(-1.5));
    CHECK(g.hi() == doctest::Approx(2.5));
    CHECK(g.point(50) == doctest::Approx(0.5));
    double w = 0.0;
    for (int i = 0; i < g.n; ++i) w += g.weight(i);
    CHECK(w == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("first step density integrates to one") {
    const auto p = base_params(16, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = Grid::centered(0.0, 4.0, 2001);
    double mass = 0.0;
    for (int i = 0; i < g.n; ++i)
        mass += g.weight(i) * density::first_step_density(p, 0, p.h(), p.x, {g.point(i)}, 8);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("step kernel rows integrate to one") {
    const auto p = base_params(8, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = Grid::centered(0.0, 6.0, 512);
    const auto K = density::build_step_kernel(p, 2, g, 8);
    for (int iz : {100, 256, 400})
        CHECK(K.row_mass(iz) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("zero drift propagation reproduces the heat kernel") {
    const auto p = base_params(16, DriftSpec::zero(1));
    const Grid g = density::default_grid(p, 1024);
    const auto seq = density::propagate(p, g, 8);
    CHECK(seq.size() == 16);
    double sup = 0.0;
    for (int i = 0; i < g.n; ++i)
        sup = std::max(sup, std::abs(seq.back().values[i] -
                                     gauss::density(1, 1.0, p.T, {g.point(i)})));
    CHECK(sup < 1e-8);
    CHECK(seq.back().mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mirror symmetry for odd drift started at zero") {
    const auto p = base_params(8, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = Grid::centered(0.0, 6.0, 1025);
    const auto seq = density::propagate(p, g, 8);
    const auto& v = seq.back().values;
    for (int i = 0; i < g.n; ++i)
        CHECK(v[i] == doctest::Approx(v[g.n - 1 - i]).epsilon(1e-9));
}

TEST_CASE("chapman-kolmogorov: kernel composition matches propagation") {
    const auto p = base_params(8, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = Grid::centered(0.0, 6.0, 512);
    const auto seq = density::propagate(p, g, 8);
    const auto K = density::build_step_kernel(p, 1, g, 8);
    // seq[1] (density at t_2) = seq[0] composed with the step-1 kernel
    for (int iy : {64, 256, 400}) {
        double acc = 0.0;
        for (int iz = 0; iz < g.n; ++iz)
            acc += g.weight(iz) * seq[0].values[iz] * K.K[iz * g.n + iy];
        CHECK(acc == doctest::Approx(seq[1].values[iy]).epsilon(1e-7));
    }
}

TEST_CASE("density_at: stored times and intra-step consistency") {
    const auto p = base_params(8, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = Grid::centered(0.0, 6.0, 512);
    const auto seq = density::propagate(p, g, 8);
    const auto at = density::density_at(p, seq, 0, 3 * p.h(), 8);
    CHECK(at.values == seq[2].values);
    // partial step stays a probability density
    const auto mid = density::density_at(p, seq, 0, 3.5 * p.h(), 8);
    CHECK(mid.mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mid.t == doctest::Approx(3.5 * p.h()));
}

TEST_CASE("duhamel residual within budget") {
    const auto p = base_params(32, DriftSpec::bounded_sign(1.0, 1));
    const Grid g = density::default_grid(p, 1024);
    const auto seq = density::propagate(p, g, 8);
    const auto r = density::duhamel_residual(p, seq, g, 8);
    CHECK(r.sup_residual <= r.budget);
}

TEST_CASE("empirical gaussian bound") {
    const auto p = base_params(16, DriftSpec::zero(1));
    const Grid g = density::default_grid(p, 1024);
    const auto seq = density::propagate(p, g, 8);
    // g_1 / g_2 peaks at the center: sqrt(2)
    CHECK(density::empirical_gaussian_bound(seq.back(), p.x, 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("cdf, ks statistic, and moments") {
    const auto p = base_params(16, DriftSpec::zero(1));
    const Grid g = density::default_grid(p, 2048);
    const auto gd = density::propagate(p, g, 8).back();
    CHECK(density::cdf_at(gd, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(density::cdf_at(gd, g.hi()) == doctest::Approx(1.0).epsilon(1e-6));
    // E|N(0,1)| = sqrt(2/pi)
    CHECK(density::abs_moment(gd, 1) ==
          doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-5));
    CHECK(density::abs_moment(gd, 2) == doctest::Approx(1.0).epsilon(1e-5));

    // exact quantile samples give a tiny ks statistic; a shifted set does not
    std::vector<double> samples;
    const int N = 2000;
    for (int i = 0; i < N; ++i) {
        double lo = g.lo, hi = g.hi();
        const double target = (i + 0.5) / N;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (density::cdf_at(gd, mid) < target ? lo : hi) = mid;
        }
        samples.push_back(0.5 * (lo + hi));
    }
    CHECK(density::ks_statistic(gd, samples) < 1.0 / N + 1e-6);
    for (double& s : samples) s += 0.5;
    CHECK(density::ks_statistic(gd, samples) > 0.1);
}

TEST_CASE("csv export shape") {
    const auto p = base_params(4, DriftSpec::zero(1));
    const Grid g = Grid::centered(0.0, 6.0, 65);
    const auto gd = density::propagate(p, g, 4).back();
    std::ostringstream os;
    density::write_csv(os, gd, {{"n", "4"}});
    const std::string out = os.str();
    CHECK(out.find("# n: 4") != std::string::npos);
    CHECK(out.find("y,gamma") != std::string::npos);
    int lines = 0;
    for (char ch : out)
        if (ch == '\n') ++lines;
    CHECK(lines >= 65 + 2);
}

TEST_CASE("d=2 propagation conserves mass and symmetry") {
    SchemeParams p;
    p.T = 1.0;
    p.n = 4;
    p.x = {0.0, 0.0};
    p.B = 1.0;
    p.drift = DriftSpec::bounded_sign(1.0, 2);
    const Grid g = Grid::centered(0.0, 5.0, 129);
    const auto seq = density::propagate(p, g, 4);
    const auto& gd = seq.back();
    CHECK(gd.d == 2);
    CHECK(gd.mass == doctest::Approx(1.0).epsilon(1e-5));
    // radial drift started at the origin: symmetric under axis swap
    for (int i : {20, 64, 100})
        for (int j : {30, 64, 90})
            CHECK(gd.values[i * g.n + j] ==
                  doctest::Approx(gd.values[j * g.n + i]).epsilon(1e-8));
}

TEST_SUITE_END();
