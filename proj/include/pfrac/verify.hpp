#pragma once

// Invariant suite behind `solver verify`: sampled properties of the spectral
// core, theta profile, extension, nonlinearity and energy modules.

#include "pfrac/config.hpp"

#include <string>
#include <vector>

namespace pfrac {

struct PropertyResult {
    std::string name;
    std::string module;
    bool passed = false;
    double value = 0.0;  // the measured quantity (error, gap, ...)
    std::string detail{};
};

/// Energy and nonlinearity properties use the configured grid, parameters
/// and nonlinearity; the rest use fixed reference cases. Never throws for a
/// failing property; an exception inside a check marks it failed.
std::vector<PropertyResult> run_property_suite(const RunConfig& cfg);

}  // namespace pfrac
