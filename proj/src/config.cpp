#include "sdelab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sdelab::config {

namespace {

analysis::TestFn phi_of(const std::string& s) {
    if (s == "coordinate") return analysis::TestFn::Coordinate;
    if (s == "squared_norm") return analysis::TestFn::SquaredNorm;
    if (s == "smooth_bump") return analysis::TestFn::SmoothBump;
    if (s == "half_space") return analysis::TestFn::HalfSpace;
    throw std::invalid_argument("unknown test function: " + s);
}

std::string phi_name(analysis::TestFn f) {
    switch (f) {
        case analysis::TestFn::Coordinate: return "coordinate";
        case analysis::TestFn::SquaredNorm: return "squared_norm";
        case analysis::TestFn::SmoothBump: return "smooth_bump";
        case analysis::TestFn::HalfSpace: return "half_space";
    }
    return "coordinate";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig c;
    if (j.contains("drift")) c.drift = DriftSpec::from_json(j.at("drift").dump());
    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        c.T = s.value("T", c.T);
        if (s.contains("x")) c.x = s.at("x").get<Vec>();
        c.B = s.value("B", c.B);
        const std::string v = s.value("variant", "primary");
        if (v == "primary") c.variant = scheme::Variant::Primary;
        else if (v == "zero_first") c.variant = scheme::Variant::ZeroFirst;
        else throw std::invalid_argument("unknown variant: " + v);
    }
    if (j.contains("study")) {
        const auto& s = j.at("study");
        if (s.contains("n_list")) c.n_list = s.at("n_list").get<std::vector<int>>();
        c.n_ref = s.value("n_ref", c.n_ref);
        if (s.contains("grid")) {
            const auto& g = s.at("grid");
            c.grid_N = g.value("N", c.grid_N);
            c.L_factor = g.value("L_factor", c.L_factor);
            c.M = g.value("M", c.M);
        }
        c.c_weight = s.value("c_weight", c.c_weight);
    }
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        c.mc_samples = m.value("samples", c.mc_samples);
        if (m.contains("phi")) c.mc_phi = phi_of(m.at("phi").get<std::string>());
        c.mc_n = m.value("n", c.mc_n);
        c.mc_n_ref = m.value("n_ref", c.mc_n_ref);
    }
    c.seed = j.value("seed", c.seed);

    for (std::size_t i = 1; i < c.n_list.size(); ++i)
        if (c.n_list[i] <= c.n_list[i - 1])
            throw std::invalid_argument("config: n_list must be strictly increasing");
    if (!c.n_list.empty() && c.n_ref < 16 * c.n_list.back())
        throw std::invalid_argument("config: n_ref >= 16 * max(n_list) required");
    if (!(c.c_weight > 1.0)) throw std::invalid_argument("config: c_weight > 1 required");
    if (static_cast<int>(c.x.size()) != c.drift.dimension())
        throw std::invalid_argument("config: start point dimension mismatch");
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["drift"] = nlohmann::json::parse(drift.to_json());
    j["scheme"] = {{"T", T},
                   {"x", x},
                   {"B", B},
                   {"variant", variant == scheme::Variant::Primary ? "primary" : "zero_first"}};
    j["study"] = {{"n_list", n_list},
                  {"n_ref", n_ref},
                  {"grid", {{"N", grid_N}, {"L_factor", L_factor}, {"M", M}}},
                  {"c_weight", c_weight}};
    j["mc"] = {{"samples", mc_samples},
               {"phi", phi_name(mc_phi)},
               {"n", mc_n},
               {"n_ref", mc_n_ref}};
    j["seed"] = seed;
    return j.dump(2);
}

double ExperimentConfig::cutoff_constant() const {
    return B > 0.0 ? B : default_cutoff_constant(drift, T);
}

scheme::SchemeParams ExperimentConfig::scheme_params(int n) const {
    scheme::SchemeParams p;
    p.T = T;
    p.n = n;
    p.x = x;
    p.B = cutoff_constant();
    p.variant = variant;
    p.drift = drift;
    return p;
}

analysis::StudyParams ExperimentConfig::study_params() const {
    analysis::StudyParams sp;
    sp.base = scheme_params(n_list.empty() ? 1 : n_list.front());
    sp.n_list = n_list;
    sp.n_ref = n_ref;
    sp.grid_N = grid_N;
    sp.L_factor = L_factor;
    sp.M = M;
    sp.c_weight = c_weight;
    return sp;
}

density::Grid ExperimentConfig::grid() const {
    double c = 0.0;
    for (double xi : x) c += xi;
    c /= x.size();
    const double L = L_factor * std::sqrt(T) + density::displacement_budget(drift, T);
    return density::Grid::centered(c, L, grid_N);
}

}  // namespace sdelab::config
