#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdelab::lemmas {

struct SuiteItem {
    std::string name;
    bool ok = false;
    double value = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::vector<SuiteItem> items;
    bool all_ok = true;
    std::string to_json() const;
    std::string to_csv() const;  // one row per bound check: name, value, ok
};

/// The full verification sweep behind the `lemmas` command: Gaussian
/// sensitivity constants with refinement stability and c-monotonicity,
/// seeded random convolution-bound draws, beta-function identities, and the
/// Gronwall constants with their numeric fixed-point checks.
SuiteReport run_suite(std::uint64_t seed);

}  // namespace sdelab::lemmas
