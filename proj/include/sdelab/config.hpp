#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdelab/analysis.hpp"

namespace sdelab::config {

/// One JSON document driving every CLI command; unspecified fields take the
/// documented defaults.
struct ExperimentConfig {
    DriftSpec drift = DriftSpec::zero(1);
    // scheme
    double T = 1.0;
    Vec x{0.0};
    double B = 0.0;  // 0: default_cutoff_constant of the drift
    scheme::Variant variant = scheme::Variant::Primary;
    // study
    std::vector<int> n_list{16, 32, 64, 128, 256, 512};
    int n_ref = 8192;
    int grid_N = 2048;
    double L_factor = 8.0;
    int M = 16;
    double c_weight = 2.0;
    // mc
    int mc_samples = 100000;
    analysis::TestFn mc_phi = analysis::TestFn::Coordinate;
    int mc_n = 64;
    int mc_n_ref = 1024;

    std::uint64_t seed = 20240901;

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string to_json() const;

    scheme::SchemeParams scheme_params(int n) const;
    analysis::StudyParams study_params() const;
    density::Grid grid() const;
    double cutoff_constant() const;  // B, resolved against the drift default
};

}  // namespace sdelab::config
