#pragma once

// Run configuration: JSON parsing with path-qualified validation errors.

#include "pfrac/linking.hpp"
#include "pfrac/nonlinearity.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pfrac {

enum class RunMode { Verify, Solve, Sweep, Diagnose };
std::string to_string(RunMode mode);
/// Throws ValidationError (path "mode") for unknown names.
RunMode parse_mode(const std::string& name);

struct RunConfig {
    RunMode mode = RunMode::Solve;
    TorusGrid grid{1, 6.283185307179586, 64};
    FracParams params{0.5, 1.0};
    NonlinearitySpec spec = NonlinearitySpec::zero();
    LinkingConfig solver{};
    std::vector<double> m_list{};
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    double limit_tol = 1e-8;
    /// Sweep mode: threshold from the Sobolev estimate, checked at parse time.
    std::optional<double> m0{};
    /// Diagnose mode: solution file and L^q exponents.
    std::filesystem::path solution_path{};
    std::vector<double> q_list{2.0, 4.0, 8.0, 16.0};
    /// Extension dump sampling (solve mode with --dump-extension).
    int extension_nodes = 48;
};

struct ParseOptions {
    /// Relative file references (coefficient fields, solutions) resolve here.
    std::filesystem::path base_dir{};
    /// Overrides the document's mode and seed when set (command line).
    std::optional<RunMode> mode{};
    std::optional<std::uint64_t> seed{};
};

/// Throws ParseError for malformed JSON and ValidationError (with a dotted
/// path such as "nonlinearity.p") for unknown keys, wrong types and
/// violated invariants.
RunConfig parse_config(const std::string& text, const ParseOptions& options = {});

}  // namespace pfrac
