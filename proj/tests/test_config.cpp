#include <doctest.h>

#include <cmath>

#include "sdelab/config.hpp"

using namespace sdelab;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults") {
    const auto c = config::ExperimentConfig::from_json("{}");
    CHECK(c.T == 1.0);
    CHECK(c.x == Vec{0.0});
    CHECK(c.n_list == std::vector<int>{16, 32, 64, 128, 256, 512});
    CHECK(c.n_ref == 8192);
    CHECK(c.grid_N == 2048);
    CHECK(c.M == 16);
    CHECK(c.c_weight == 2.0);
    CHECK(c.drift.family() == DriftFamily::Zero);
    CHECK(c.seed == 20240901);
}

TEST_CASE("round trip") {
    const std::string text = R"({
        "drift": {"family": "bounded_sign", "d": 1, "rho": "inf", "q": "inf",
                  "params": {"beta": 1.5}},
        "scheme": {"T": 2.0, "x": [0.25], "B": 3.0, "variant": "zero_first"},
        "study": {"n_list": [8, 16], "n_ref": 256,
                  "grid": {"N": 512, "L_factor": 6.0, "M": 8}, "c_weight": 3.0},
        "mc": {"samples": 1000, "phi": "half_space", "n": 8, "n_ref": 32},
        "seed": 12
    })";
    const auto c = config::ExperimentConfig::from_json(text);
    CHECK(c.T == 2.0);
    CHECK(c.B == 3.0);
    CHECK(c.variant == scheme::Variant::ZeroFirst);
    CHECK(c.n_list == std::vector<int>{8, 16});
    CHECK(c.L_factor == 6.0);
    CHECK(c.mc_phi == analysis::TestFn::HalfSpace);
    CHECK(c.seed == 12);
    const auto c2 = config::ExperimentConfig::from_json(c.to_json());
    CHECK(c2.to_json() == c.to_json());
}

TEST_CASE("derived objects") {
    const auto c = config::ExperimentConfig::from_json(R"({
        "drift": {"family": "bounded_sign", "d": 1, "rho": "inf", "q": "inf",
                  "params": {"beta": 1.5}},
        "study": {"n_list": [16, 32], "n_ref": 512, "grid": {"N": 256}}
    })");
    // B = 0 resolves to the drift's sup norm
    CHECK(c.cutoff_constant() == doctest::Approx(1.5));
    const auto p = c.scheme_params(32);
    CHECK(p.n == 32);
    CHECK(p.h() == doctest::Approx(1.0 / 32));
    CHECK(p.B == doctest::Approx(1.5));
    const auto g = c.grid();
    CHECK(g.n == 256);
    // half-width = L_factor sqrt(T) + displacement budget (= beta T here)
    CHECK(g.hi() == doctest::Approx(8.0 + 1.5));
    const auto sp = c.study_params();
    CHECK(sp.n_ref == 512);
    CHECK(sp.c_weight == 2.0);
}

TEST_CASE("validation failures") {
    CHECK_THROWS(config::ExperimentConfig::from_json(
        R"({"study": {"n_list": [32, 16], "n_ref": 8192}})"));
    CHECK_THROWS(config::ExperimentConfig::from_json(
        R"({"study": {"n_list": [16, 32], "n_ref": 64}})"));
    CHECK_THROWS(config::ExperimentConfig::from_json(R"({"study": {"c_weight": 0.5}})"));
    CHECK_THROWS(config::ExperimentConfig::from_json(R"({"scheme": {"x": [0.0, 0.0]}})"));
    CHECK_THROWS(config::ExperimentConfig::from_json(R"({"scheme": {"variant": "other"}})"));
}

TEST_SUITE_END();
