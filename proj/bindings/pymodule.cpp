#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "sdelab/analysis.hpp"
#include "sdelab/config.hpp"
#include "sdelab/gaussian.hpp"
#include "sdelab/lemmas.hpp"

namespace py = pybind11;
using namespace sdelab;

namespace {

// Python exponents are plain floats; math.inf maps to the distinguished
// infinite state.
Exponent exp_of(double v) { return std::isinf(v) ? Exponent::inf() : Exponent(v); }
double exp_to(const Exponent& e) {
    return e.is_inf() ? std::numeric_limits<double>::infinity() : e.value();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cutoffed time-randomized Euler schemes for singular-drift SDEs";

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("admissible", &ConditionReport::admissible)
        .def_readonly("alpha", &ConditionReport::alpha)
        .def_readonly("threshold_exponent", &ConditionReport::threshold_exponent)
        .def_property_readonly("failure_reason", [](const ConditionReport& r) {
            return r.failure_reason ? py::cast(*r.failure_reason) : py::none();
        });

    m.def("check_condition",
          [](int d, double rho, double q) { return check_condition(d, exp_of(rho), exp_of(q)); },
          py::arg("d"), py::arg("rho"), py::arg("q"));

    py::class_<DriftSpec>(m, "DriftSpec")
        .def_static("zero", [](int d) { return DriftSpec::zero(d); }, py::arg("d") = 1)
        .def_static("constant", [](Vec mu) { return DriftSpec::constant(std::move(mu)); },
                    py::arg("mu"))
        .def_static("bounded_sign",
                    [](double beta, int d) { return DriftSpec::bounded_sign(beta, d); },
                    py::arg("beta"), py::arg("d") = 1)
        .def_static("power_singularity",
                    [](double theta, double gamma, double radius, int d, double rho, double q) {
                        return DriftSpec::power_singularity(theta, gamma, radius, d, exp_of(rho),
                                                            exp_of(q));
                    },
                    py::arg("theta"), py::arg("gamma"), py::arg("radius"), py::arg("d"),
                    py::arg("rho"), py::arg("q") = std::numeric_limits<double>::infinity())
        .def_static("time_singular",
                    [](double delta, const DriftSpec& inner, double q) {
                        return DriftSpec::time_singular(delta, inner, exp_of(q));
                    },
                    py::arg("delta"), py::arg("inner"), py::arg("q"))
        .def_static("from_json", &DriftSpec::from_json)
        .def("to_json", &DriftSpec::to_json)
        .def("evaluate", &DriftSpec::evaluate, py::arg("t"), py::arg("x"))
        .def("condition", &DriftSpec::condition)
        .def_property_readonly("d", &DriftSpec::dimension)
        .def_property_readonly("rho", [](const DriftSpec& b) { return exp_to(b.rho()); })
        .def_property_readonly("q", [](const DriftSpec& b) { return exp_to(b.q()); });

    m.def("cutoff_primary", &cutoff_primary, py::arg("drift"), py::arg("h"), py::arg("B"),
          py::arg("t"), py::arg("x"));
    m.def("cutoff_zero_first", &cutoff_zero_first, py::arg("drift"), py::arg("h"), py::arg("B"),
          py::arg("t"), py::arg("x"));
    m.def("lq_lrho_norm",
          [](const DriftSpec& b, double T) {
              const NormResult r = lq_lrho_norm(b, T);
              return py::make_tuple(r.value, r.error_estimate, r.member);
          },
          py::arg("drift"), py::arg("T"));
    m.def("default_cutoff_constant", &default_cutoff_constant, py::arg("drift"), py::arg("T"));

    m.def("gauss_density", &gauss::density, py::arg("d"), py::arg("c"), py::arg("u"), py::arg("x"));
    m.def("gauss_grad", &gauss::grad, py::arg("d"), py::arg("c"), py::arg("u"), py::arg("x"));
    m.def("gauss_hess", &gauss::hess, py::arg("d"), py::arg("c"), py::arg("u"), py::arg("x"));
    m.def("beta_function", &gauss::beta_function, py::arg("a"), py::arg("b"));

    py::enum_<scheme::Variant>(m, "Variant")
        .value("PRIMARY", scheme::Variant::Primary)
        .value("ZERO_FIRST", scheme::Variant::ZeroFirst);

    py::class_<scheme::SchemeParams>(m, "SchemeParams")
        .def(py::init([](double T, int n, Vec x, double B, scheme::Variant v,
                         const DriftSpec& drift) {
                 scheme::SchemeParams p;
                 p.T = T;
                 p.n = n;
                 p.x = std::move(x);
                 p.B = B;
                 p.variant = v;
                 p.drift = drift;
                 p.validate();
                 return p;
             }),
             py::arg("T"), py::arg("n"), py::arg("x"), py::arg("B") = 1.0,
             py::arg("variant") = scheme::Variant::Primary,
             py::arg("drift") = DriftSpec::zero(1))
        .def_readonly("T", &scheme::SchemeParams::T)
        .def_readonly("n", &scheme::SchemeParams::n)
        .def_property_readonly("h", &scheme::SchemeParams::h);

    py::class_<scheme::PathSample>(m, "PathSample")
        .def_readonly("times", &scheme::PathSample::times)
        .def_readonly("states", &scheme::PathSample::states)
        .def_readonly("u_draws", &scheme::PathSample::u_draws)
        .def_readonly("dw", &scheme::PathSample::dw);

    m.def("step_floor", &scheme::step_floor, py::arg("s"), py::arg("h"));
    m.def("simulate_path", &scheme::simulate_path, py::arg("params"), py::arg("seed"),
          py::arg("stream"));
    m.def("simulate_terminals", &scheme::simulate_terminals, py::arg("params"), py::arg("count"),
          py::arg("seed"), py::arg("substep") = 1);

    py::class_<density::Grid>(m, "Grid")
        .def_static("centered", &density::Grid::centered, py::arg("center"), py::arg("L"),
                    py::arg("N"))
        .def_readonly("lo", &density::Grid::lo)
        .def_readonly("delta", &density::Grid::delta)
        .def_readonly("n", &density::Grid::n)
        .def("point", &density::Grid::point);

    py::class_<density::GridDensity>(m, "GridDensity")
        .def_readonly("d", &density::GridDensity::d)
        .def_readonly("axis", &density::GridDensity::axis)
        .def_readonly("t", &density::GridDensity::t)
        .def_readonly("values", &density::GridDensity::values)
        .def_readonly("mass", &density::GridDensity::mass)
        .def_readonly("tail_defect", &density::GridDensity::tail_defect);

    m.def("default_grid", &density::default_grid, py::arg("params"), py::arg("N"));
    m.def("first_step_density", &density::first_step_density, py::arg("params"), py::arg("k"),
          py::arg("t"), py::arg("x"), py::arg("y"), py::arg("M"));
    m.def("propagate", &density::propagate, py::arg("params"), py::arg("grid"), py::arg("M"),
          py::arg("k0") = 0, py::arg("mass_budget") = 1e-6);
    m.def("reference_density", &density::reference_density, py::arg("params"), py::arg("n_ref"),
          py::arg("grid"), py::arg("M"));
    m.def("duhamel_residual",
          [](const scheme::SchemeParams& p, const std::vector<density::GridDensity>& seq,
             const density::Grid& g, int M) {
              const auto r = density::duhamel_residual(p, seq, g, M);
              return py::make_tuple(r.sup_residual, r.budget);
          },
          py::arg("params"), py::arg("seq"), py::arg("grid"), py::arg("M"));
    m.def("empirical_gaussian_bound", &density::empirical_gaussian_bound, py::arg("density"),
          py::arg("x"), py::arg("c"));
    m.def("holder_time_modulus", &density::holder_time_modulus, py::arg("params"), py::arg("grid"),
          py::arg("M"), py::arg("k"), py::arg("l"), py::arg("t"), py::arg("c"));
    m.def("ks_statistic", &density::ks_statistic, py::arg("density"), py::arg("samples"));

    m.def("weighted_sup_error", &analysis::weighted_sup_error, py::arg("num"), py::arg("ref"),
          py::arg("x"), py::arg("c"));
    m.def("tv_error", &analysis::tv_error, py::arg("num"), py::arg("ref"));
    m.def("fit_rate",
          [](const std::vector<std::pair<double, double>>& pairs) {
              const auto r = analysis::fit_rate(pairs);
              return py::make_tuple(r.slope, r.intercept, r.residual_norm);
          },
          py::arg("pairs"));
    m.def("mc_weak_error",
          [](const scheme::SchemeParams& p, const std::string& phi, int n, int n_ref, int samples,
             std::uint64_t seed) {
              analysis::TestFn f;
              if (phi == "coordinate") f = analysis::TestFn::Coordinate;
              else if (phi == "squared_norm") f = analysis::TestFn::SquaredNorm;
              else if (phi == "smooth_bump") f = analysis::TestFn::SmoothBump;
              else if (phi == "half_space") f = analysis::TestFn::HalfSpace;
              else throw std::invalid_argument("unknown test function: " + phi);
              const auto e = analysis::mc_weak_error(p, f, n, n_ref, samples, seed);
              py::dict d;
              d["estimate"] = e.estimate;
              d["std_error"] = e.std_error;
              d["ci_low"] = e.ci_low;
              d["ci_high"] = e.ci_high;
              d["samples"] = e.samples;
              return d;
          },
          py::arg("params"), py::arg("phi"), py::arg("n"), py::arg("n_ref"), py::arg("samples"),
          py::arg("seed"));

    m.def("run_rate_study_json",
          [](const std::string& config_json) {
              const auto cfg = config::ExperimentConfig::from_json(config_json);
              return analysis::run_rate_study(cfg.study_params()).to_json();
          },
          py::arg("config_json"));
    m.def("run_lemma_suite_json",
          [](std::uint64_t seed) { return lemmas::run_suite(seed).to_json(); }, py::arg("seed"));
}
