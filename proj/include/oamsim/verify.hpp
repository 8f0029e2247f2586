#pragma once

// Self-check suites behind `oamsim verify`.

#include <string>
#include <vector>

namespace oamsim::verify {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// 16 rows: every oracle on every encoded basis state, phase +1, deviation < 1e-12.
std::vector<Check> truth_tables(int l_max);

/// U^dagger U = I for every element factory and every oracle bench.
std::vector<Check> unitarity(int l_max);

/// Optical verdict vs circuit-model verdict for the four boolean functions.
std::vector<Check> cross_check(int l_max);

}  // namespace oamsim::verify
