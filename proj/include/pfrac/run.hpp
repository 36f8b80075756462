#pragma once

// Orchestration of the four run modes and their artifacts.
//
// Exit codes: 0 success, 2 configuration / validation, 3 solver failure,
// 4 a verified property failed, 1 anything else (I/O).

#include "pfrac/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pfrac {

inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitVerification = 4;

struct RunFlags {
    bool solver_trace = false;    // solve: write solver_trace.csv
    bool dump_extension = false;  // solve: write extension.json
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::filesystem::path> files{};
};

/// Runs cfg.mode, writing into cfg.output_dir and a short report to `log`.
/// Module errors are mapped to exit codes, not rethrown.
RunOutcome run(const RunConfig& cfg, const RunFlags& flags, std::ostream& log);

/// Exit code for an exception escaping a module.
int exit_code_for(const std::exception& e);

}  // namespace pfrac
