// Command-line orchestrator.  Every command is a deterministic function of
// (config file, seed); outputs are CSV/JSON with 17-digit floats.  Exit
// codes: 0 success/pass, 1 runtime failure, 2 inadmissible configuration.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sdelab/config.hpp"
#include "sdelab/lemmas.hpp"

namespace fs = std::filesystem;
using namespace sdelab;

namespace {

constexpr int EXIT_FAIL = 1;
constexpr int EXIT_INADMISSIBLE = 2;

struct Options {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;  // accepted for interface stability; execution is serial
};

config::ExperimentConfig load(const Options& opt) {
    config::ExperimentConfig cfg = opt.config_path.empty()
                                       ? config::ExperimentConfig{}
                                       : config::ExperimentConfig::load(opt.config_path);
    if (opt.seed_set) cfg.seed = opt.seed;
    return cfg;
}

std::ostream& open_out(const Options& opt, const std::string& name, std::ofstream& file) {
    if (opt.out_dir.empty()) return std::cout;
    fs::create_directories(opt.out_dir);
    file.open(fs::path(opt.out_dir) / name);
    if (!file) throw std::runtime_error("cannot open output file: " + name);
    return file;
}

nlohmann::json condition_json(const ConditionReport& rep) {
    nlohmann::json j;
    j["admissible"] = rep.admissible;
    j["alpha"] = rep.alpha;
    j["threshold_exponent"] = rep.threshold_exponent;
    if (rep.failure_reason) j["failure_reason"] = *rep.failure_reason;
    return j;
}

int cmd_check(const Options& opt) {
    const auto cfg = load(opt);
    const ConditionReport rep = cfg.drift.condition();
    std::ofstream f;
    open_out(opt, "condition.json", f) << condition_json(rep).dump(2) << "\n";
    return rep.admissible ? 0 : EXIT_INADMISSIBLE;
}

int cmd_density(const Options& opt, int n, double t) {
    const auto cfg = load(opt);
    if (!cfg.drift.condition().admissible) return EXIT_INADMISSIBLE;
    auto p = cfg.scheme_params(n);
    const density::Grid grid = cfg.grid();
    const auto seq = density::propagate(p, grid, cfg.M);
    const density::GridDensity gd =
        t >= p.T ? seq.back() : density::density_at(p, seq, 0, t, cfg.M);
    std::ofstream f;
    density::write_csv(open_out(opt, "density.csv", f), gd,
                       {{"n", std::to_string(n)},
                        {"variant", p.variant == scheme::Variant::Primary ? "primary"
                                                                          : "zero_first"},
                        {"drift", cfg.drift.to_json()}});
    return 0;
}

int cmd_rate(const Options& opt) {
    const auto cfg = load(opt);
    if (!cfg.drift.condition().admissible) return EXIT_INADMISSIBLE;
    const analysis::RateReport rep = analysis::run_rate_study(cfg.study_params());
    std::ofstream f1, f2;
    if (!opt.out_dir.empty()) rep.write_csv(open_out(opt, "rate.csv", f1));
    open_out(opt, "rate.json", f2) << rep.to_json() << "\n";
    return rep.pass ? 0 : EXIT_FAIL;
}

int cmd_mc(const Options& opt) {
    const auto cfg = load(opt);
    if (!cfg.drift.condition().admissible) return EXIT_INADMISSIBLE;
    const auto est = analysis::mc_weak_error(cfg.scheme_params(cfg.mc_n), cfg.mc_phi, cfg.mc_n,
                                             cfg.mc_n_ref, cfg.mc_samples, cfg.seed);
    nlohmann::json j;
    j["estimate"] = est.estimate;
    j["std_error"] = est.std_error;
    j["ci_low"] = est.ci_low;
    j["ci_high"] = est.ci_high;
    j["samples"] = est.samples;
    j["n"] = cfg.mc_n;
    j["n_ref"] = cfg.mc_n_ref;
    std::ofstream f;
    open_out(opt, "mc.json", f) << j.dump(2) << "\n";
    return 0;
}

int cmd_lemmas(const Options& opt) {
    const auto cfg = load(opt);
    const lemmas::SuiteReport rep = lemmas::run_suite(cfg.seed);
    std::ofstream f1, f2;
    open_out(opt, "lemmas.json", f1) << rep.to_json() << "\n";
    if (!opt.out_dir.empty()) open_out(opt, "lemmas.csv", f2) << rep.to_csv();
    return rep.all_ok ? 0 : EXIT_FAIL;
}

int cmd_simulate(const Options& opt, int n, std::uint64_t stream) {
    const auto cfg = load(opt);
    if (!cfg.drift.condition().admissible) return EXIT_INADMISSIBLE;
    const auto path = scheme::simulate_path(cfg.scheme_params(n), cfg.seed, stream);
    std::ofstream f;
    std::ostream& os = open_out(opt, "path.csv", f);
    const int d = cfg.drift.dimension();
    os << "k,t_k,U_k";
    for (int i = 0; i < d; ++i) os << ",dW" << i;
    for (int i = 0; i < d; ++i) os << ",X" << i;
    os << "\n";
    char buf[64];
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", path.times[k]);
        os << k << "," << buf;
        const bool last = k + 1 == path.times.size();
        if (!last) {
            std::snprintf(buf, sizeof buf, "%.17g", path.u_draws[k]);
            os << "," << buf;
        } else {
            os << ",";
        }
        for (int i = 0; i < d; ++i) {
            if (!last) {
                std::snprintf(buf, sizeof buf, "%.17g", path.dw[k][i]);
                os << "," << buf;
            } else {
                os << ",";
            }
        }
        for (int i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", path.states[k][i]);
            os << "," << buf;
        }
        os << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for cutoffed time-randomized Euler schemes"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "JSON experiment config");
    app.add_option("--seed", opt.seed, "override the config seed")
        ->each([&](const std::string&) { opt.seed_set = true; });
    app.add_option("--threads", opt.threads, "worker pool size (currently serial)");
    app.add_option("--out", opt.out_dir, "output directory (default: stdout)");

    auto* check = app.add_subcommand("check", "admissibility report for (d, rho, q)");
    auto* dens = app.add_subcommand("density", "propagate and export a grid density");
    int dens_n = 64;
    double dens_t = -1.0;
    dens->add_option("--n", dens_n, "step count");
    dens->add_option("--t", dens_t, "evaluation time (default: T)");
    auto* rate = app.add_subcommand("rate", "full convergence-rate study");
    auto* mc = app.add_subcommand("mc", "Monte Carlo weak error with CRN coupling");
    auto* lem = app.add_subcommand("lemmas", "lemma verification suite");
    auto* sim = app.add_subcommand("simulate", "dump one trajectory as CSV");
    int sim_n = 64;
    std::uint64_t sim_stream = 0;
    sim->add_option("--n", sim_n, "step count");
    sim->add_option("--stream", sim_stream, "random stream index");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(opt);
        if (dens->parsed()) return cmd_density(opt, dens_n, dens_t < 0 ? load(opt).T : dens_t);
        if (rate->parsed()) return cmd_rate(opt);
        if (mc->parsed()) return cmd_mc(opt);
        if (lem->parsed()) return cmd_lemmas(opt);
        if (sim->parsed()) return cmd_simulate(opt, sim_n, sim_stream);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INADMISSIBLE;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_FAIL;
    }
    return EXIT_FAIL;
}
