#include "sdelab/lemmas.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdelab/analysis.hpp"
#include "sdelab/gaussian.hpp"
#include "sdelab/rng.hpp"

namespace sdelab::lemmas {

namespace {

const char* ineq_name(gauss::SensitivityInequality i) {
    switch (i) {
        case gauss::SensitivityInequality::GradBound: return "grad_bound";
        case gauss::SensitivityInequality::TimeDerivBound: return "time_deriv_bound";
        case gauss::SensitivityInequality::SpaceHolder: return "space_holder";
        case gauss::SensitivityInequality::TimeHolder: return "time_holder";
    }
    return "?";
}

void push(SuiteReport& rep, std::string name, bool ok, double value, std::string detail = "") {
    rep.items.push_back({std::move(name), ok, value, std::move(detail)});
    rep.all_ok = rep.all_ok && ok;
}

}  // namespace

SuiteReport run_suite(std::uint64_t seed) {
    SuiteReport rep;

    // Gaussian sensitivities: finite constants, <= 2% drift under 2x grid
    // refinement, monotone nonincreasing in c.
    const gauss::SensitivityInequality ineqs[] = {
        gauss::SensitivityInequality::GradBound, gauss::SensitivityInequality::TimeDerivBound,
        gauss::SensitivityInequality::SpaceHolder, gauss::SensitivityInequality::TimeHolder};
    for (auto ineq : ineqs) {
        gauss::SensitivityGrid coarse, fine;
        fine.n_u = 2 * coarse.n_u;
        fine.n_x = 2 * coarse.n_x;
        const double v0 = gauss::sensitivity_constant_search(ineq, 2.0, coarse);
        const double v1 = gauss::sensitivity_constant_search(ineq, 2.0, fine);
        const double rel = std::abs(v1 - v0) / v1;
        push(rep, std::string("sensitivity.") + ineq_name(ineq) + ".stable",
             std::isfinite(v1) && rel <= 0.02, v1,
             "refinement change " + std::to_string(rel));
        double prev = std::numeric_limits<double>::infinity();
        bool mono = true;
        for (double c : {1.5, 2.0, 4.0}) {
            const double v = gauss::sensitivity_constant_search(ineq, c);
            mono = mono && v <= prev * (1.0 + 1e-12);
            prev = v;
        }
        push(rep, std::string("sensitivity.") + ineq_name(ineq) + ".monotone_c", mono, prev);
    }

    // Lemma 2.3: 20 seeded admissible draws with a power-singularity phi.
    {
        const rng::Substream u(seed, 0, 2);
        std::uint64_t ctr = 0;
        auto rnd = [&]() { return u.uniform(ctr++); };
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 20;) {
            const double beta = 0.4 * rnd(), gam = 0.4 * rnd();
            const double rp = 2.0 + 6.0 * rnd(), qp = 3.0 + 7.0 * rnd();
            const double gph = 0.3 * rnd();
            const double pb = beta + 0.5 / rp, pg = gam + 0.5 / rp;
            if (std::max(pb, pg) >= 1.0 - 1.0 / qp || gph * rp >= 1.0) continue;
            const DriftSpec phi = DriftSpec::power_singularity(0.5 + rnd(), gph, 1.0, 1,
                                                              Exponent(rp), Exponent::inf());
            const double x = 2.0 * rnd() - 1.0, y = 2.0 * rnd() - 1.0;
            const double s = 0.2 * rnd(), t = s + 0.3 + 0.7 * rnd();
            const auto r = gauss::convolution_bound_check(Exponent(rp), Exponent(qp), beta, gam,
                                                          phi, s, t, x, y);
            if (r.satisfied) ++ok;
            worst = std::max(worst, r.lhs / r.rhs);
            ++i;
        }
        push(rep, "convolution_bound.random_draws", ok == 20, worst,
             std::to_string(ok) + "/20 satisfied, worst lhs/rhs shown");
    }
    {
        // Chapman-Kolmogorov collapse: phi == 1, beta = gamma = 0
        const auto r = gauss::convolution_bound_check(Exponent::inf(), Exponent::inf(), 0.0, 0.0,
                                                      DriftSpec::constant({1.0}), 0.0, 1.0, 0.0,
                                                      0.0);
        push(rep, "convolution_bound.constant_phi", r.satisfied, r.lhs / r.rhs);
    }

    // Beta function identities.
    push(rep, "beta.B(1,1)", std::abs(gauss::beta_function(1, 1) - 1.0) < 1e-12,
         gauss::beta_function(1, 1));
    push(rep, "beta.B(0.5,0.5)", std::abs(gauss::beta_function(0.5, 0.5) - M_PI) < 1e-12 * M_PI,
         gauss::beta_function(0.5, 0.5));
    push(rep, "beta.B(1,0.5)", std::abs(gauss::beta_function(1, 0.5) - 2.0) < 1e-12,
         gauss::beta_function(1, 0.5));
    push(rep, "beta.symmetry",
         gauss::beta_function(0.3, 1.7) == gauss::beta_function(1.7, 0.3),
         gauss::beta_function(0.3, 1.7));

    // Gronwall-Volterra.
    {
        analysis::GronwallInput gi;
        gi.which = analysis::GronwallInput::Case::I;
        gi.beta_tilde = 0.0;
        gi.beta = 0.0;
        gi.eta = 1.0;
        gi.delta = 1.0;
        gi.T = 1.0;
        const double K = analysis::gronwall_constant(gi);
        push(rep, "gronwall.case1_exponential", std::abs(K - std::exp(1.0)) < 1e-10 * std::exp(1.0),
             K);
        const auto chk = analysis::gronwall_numeric_check(gi);
        push(rep, "gronwall.case1_fixed_point", chk.satisfied, chk.sup_f);

        gi.delta = 0.0;
        push(rep, "gronwall.case1_delta0", analysis::gronwall_constant(gi) == gi.eta,
             analysis::gronwall_constant(gi));
    }
    {
        analysis::GronwallInput g2;
        g2.which = analysis::GronwallInput::Case::II;
        g2.beta_tilde = 0.0;
        g2.beta_hat = 0.5;
        g2.beta_check = 0.0;
        g2.a = 1.0;
        g2.b = 1.0;
        g2.T = 0.04;
        const double K = analysis::gronwall_small_time(g2, g2.T);
        push(rep, "gronwall.case2_remark", std::abs(K - 5.0 / 3.0) < 1e-10, K);
        push(rep, "gronwall.case2_min_of_bounds", analysis::gronwall_constant(g2) <= K,
             analysis::gronwall_constant(g2));
    }
    {
        // branch consistency: beta_hat = 0 reduces case II to case I
        analysis::GronwallInput g2;
        g2.which = analysis::GronwallInput::Case::II;
        g2.beta_tilde = 0.3;
        g2.beta_hat = 0.0;
        g2.beta_check = 0.1;
        g2.a = 2.0;
        g2.b = 0.7;
        g2.T = 1.5;
        analysis::GronwallInput g1;
        g1.which = analysis::GronwallInput::Case::I;
        g1.beta_tilde = 0.3;
        g1.beta = 0.1;
        g1.eta = 2.0;
        g1.delta = 0.7;
        g1.T = 1.5;
        const double k2 = analysis::gronwall_constant(g2);
        const double k1 = analysis::gronwall_constant(g1);
        push(rep, "gronwall.case2_reduces_to_case1", std::abs(k2 - k1) < 1e-12 * k1, k2);
    }
    {
        const rng::Substream u(seed, 1, 2);
        std::uint64_t ctr = 0;
        auto rnd = [&]() { return u.uniform(ctr++); };
        int ok = 0;
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            analysis::GronwallInput g2;
            g2.which = analysis::GronwallInput::Case::II;
            g2.beta_tilde = 0.8 * rnd();
            g2.beta_hat = 0.8 * rnd();
            g2.beta_check = g2.beta_tilde + g2.beta_hat - 1.0 + 0.2 + 1.0 * rnd();
            g2.a = 0.5 + rnd();
            g2.b = 0.1 + rnd();
            g2.T = 0.2 + rnd();
            const auto chk = analysis::gronwall_numeric_check(g2);
            if (chk.satisfied) ++ok;
            worst = std::max(worst, chk.sup_f / chk.constant);
        }
        push(rep, "gronwall.case2_random_draws", ok == 10, worst,
             std::to_string(ok) + "/10 satisfied, worst sup_f/constant shown");
    }
    return rep;
}

std::string SuiteReport::to_json() const {
    nlohmann::json j;
    j["all_ok"] = all_ok;
    nlohmann::json arr = nlohmann::json::array();
    for (const SuiteItem& it : items)
        arr.push_back({{"name", it.name}, {"ok", it.ok}, {"value", it.value},
                       {"detail", it.detail}});
    j["items"] = arr;
    return j.dump(2);
}

std::string SuiteReport::to_csv() const {
    std::ostringstream os;
    os << "name,value,ok\n";
    char buf[64];
    for (const SuiteItem& it : items) {
        std::snprintf(buf, sizeof buf, "%.17g", it.value);
        os << it.name << "," << buf << "," << (it.ok ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace sdelab::lemmas
