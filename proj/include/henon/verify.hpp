#pragma once

#include "henon/params.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace henon {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool skipped = false;    ///< not applicable to these parameters (counts as a pass)
    double value = 0.0;      ///< measured error or margin
    double tolerance = 0.0;
    std::string detail;
};

/// Runs every module postcondition on one parameter set: bubble residual, Kelvin
/// involution, synchronization roots, Picard reproduction, asymptotics,
/// inversion symmetry, coupling-function regime, sharp constants, energy
/// identity, radial spectrum and nondegeneracy. Numerical failures inside a
/// check are reported as failed checks rather than thrown.
std::vector<CheckResult> verify_all(const ProblemParams& params);

nlohmann::json to_json(const CheckResult& check);

}  // namespace henon
