#include "pfrac/run.hpp"

#include "pfrac/continuation.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/extension.hpp"
#include "pfrac/io.hpp"
#include "pfrac/linking.hpp"
#include "pfrac/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace pfrac {
namespace {

using io::json;

struct Writer {
    const std::filesystem::path& dir;
    RunOutcome& outcome;

    void json_file(const std::string& name, const json& j) {
        io::write_json_file(dir / name, j);
        outcome.files.push_back(dir / name);
    }
    void text_file(const std::string& name, const std::string& text) {
        io::write_text_file(dir / name, text);
        outcome.files.push_back(dir / name);
    }
};

// NaN and infinity are not JSON numbers.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int run_verify(const RunConfig& cfg, Writer& out, std::ostream& log) {
    const auto results = run_property_suite(cfg);
    json props = json::array();
    int failed = 0;
    for (const auto& r : results) {
        props.push_back({{"name", r.name},
                         {"module", r.module},
                         {"passed", r.passed},
                         {"value", number_or_null(r.value)},
                         {"detail", r.detail}});
        if (!r.passed) ++failed;
        log << (r.passed ? "PASS " : "FAIL ") << r.module << '/' << r.name << "  " << r.value
            << (r.detail.empty() ? "" : "  (" + r.detail + ")") << '\n';
    }
    out.json_file("verify_report.json", {{"properties", props},
                                         {"total", results.size()},
                                         {"passed", results.size() - failed},
                                         {"failed", failed}});
    log << results.size() - failed << '/' << results.size() << " properties passed\n";
    return failed == 0 ? 0 : kExitVerification;
}

int run_solve(const RunConfig& cfg, const RunFlags& flags, Writer& out, std::ostream& log) {
    const SolverState state = minimax_search(cfg.grid, cfg.params, cfg.spec, cfg.solver);
    if (flags.solver_trace) out.text_file("solver_trace.csv", io::trace_csv(state.history));
    log << "minimax: " << to_string(state.status) << " after " << state.history.size() << " sweeps, level "
        << io::format_double(state.level) << ", grad_norm " << state.grad_norm << '\n';
    require_converged(state);

    const RefineResult refined = newton_refine(state.iterate, cfg.params, cfg.spec, 1e-11);
    const Spectrum& u = refined.solution;
    const EnergyReport energy = evaluate(u, cfg.params, cfg.spec);
    const double residual = residual_norm(u, cfg.params, cfg.spec);
    const double norm = hs_norm(u, cfg.params);

    out.json_file("solution.json", io::to_json(u));
    json report = io::to_json(energy);
    report["residual"] = residual;
    report["hs_norm"] = norm;
    report["status"] = to_string(state.status);
    report["minimax_level"] = state.level;
    report["rho"] = state.rho;
    report["eta"] = state.eta;
    report["delta_hat"] = state.delta_hat;
    report["sweeps"] = state.history.size();
    report["refine_iterations"] = refined.iterations;
    report["refine_shift"] = hs_norm(u - state.iterate, cfg.params);
    out.json_file("energy.json", report);

    if (flags.dump_extension) {
        if (cfg.params.m() == 0.0 && std::abs(u[0]) > 0.0) {
            log << "extension dump skipped: m = 0 and the solution has a mean\n";
        } else {
            out.json_file("extension.json", io::to_json(sample_extension(extend(u, cfg.params), cfg.extension_nodes)));
        }
    }
    log << "solution: level " << io::format_double(energy.value) << ", residual " << residual << ", hs_norm " << norm
        << '\n';
    const bool ok = residual < cfg.solver.ps_tol && norm > 1e-6 && energy.value > 0.0;
    return ok ? 0 : kExitVerification;
}

std::string mass_label(double m) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", m);
    return buf;
}

int run_sweep(const RunConfig& cfg, Writer& out, std::ostream& log) {
    const SweepResult sweep = sweep_m(cfg.grid, cfg.m_list, cfg.params.s(), cfg.spec, cfg.solver, *cfg.m0);
    out.text_file("sweep.csv", io::sweep_csv(sweep.records));
    for (const auto& r : sweep.records) {
        log << "m = " << mass_label(r.m) << ": " << r.status << ", alpha " << io::format_double(r.alpha) << '\n';
        if (r.converged()) out.json_file("sol_m" + mass_label(r.m) + ".json", io::to_json(r.solution));
    }
    log << "envelope [" << sweep.lambda_hat << ", " << sweep.delta_hat << "], alpha spread " << sweep.alpha_spread
        << ", max hs_norm " << sweep.max_hs_norm << '\n';

    const LimitResult limit = extract_limit(sweep, cfg.spec, cfg.limit_tol);
    out.json_file("limit.json", io::to_json(limit.solution));
    out.json_file("limit_report.json", {{"m0", *cfg.m0},
                                        {"lambda_hat", sweep.lambda_hat},
                                        {"delta_hat", sweep.delta_hat},
                                        {"alpha_spread", sweep.alpha_spread},
                                        {"max_hs_norm", sweep.max_hs_norm},
                                        {"max_l2_norm", sweep.max_l2_norm},
                                        {"envelope_holds", sweep.envelope_holds},
                                        {"bounded", sweep.bounded},
                                        {"residual", limit.residual},
                                        {"level", limit.level},
                                        {"hs_norm", limit.hs_norm},
                                        {"nontriviality", limit.nontriviality},
                                        {"in_envelope", limit.in_envelope}});
    log << "limit: residual " << limit.residual << ", int f(u)u " << limit.nontriviality << '\n';

    bool ok = sweep.envelope_holds && sweep.bounded && sweep.alpha_spread < 10.0 && limit.in_envelope;
    for (const auto& r : sweep.records) ok = ok && r.converged();
    return ok ? 0 : kExitVerification;
}

int run_diagnose(const RunConfig& cfg, Writer& out, std::ostream& log) {
    const Spectrum u = io::any_to_spectrum(io::read_json_file(cfg.solution_path));
    const BootstrapReport boot = bootstrap_diagnostic(u, cfg.q_list, cfg.params.s());
    json rows = json::array();
    for (const auto& r : boot.rows) {
        rows.push_back({{"q", r.q}, {"norm", r.norm}, {"on_ladder", r.on_ladder}});
        log << "|u|_" << r.q << " = " << r.norm << (r.on_ladder ? "  (ladder)" : "") << '\n';
    }
    json report = {{"solution", cfg.solution_path.string()},
                   {"bootstrap", {{"rows", rows}, {"growth", boot.growth}}}};
    try {
        const HolderProxy h = holder_proxy(u);
        report["holder"] = {{"alpha", h.alpha}, {"spectral_alpha", number_or_null(h.spectral_alpha)}};
        log << "Hölder proxy " << h.alpha << '\n';
    } catch (const InsufficientDecay& e) {
        report["holder"] = {{"error", e.what()}};
        log << "Hölder proxy unavailable: " << e.what() << '\n';
    }
    out.json_file("diagnose.json", report);
    return 0;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
        dynamic_cast<const ParameterError*>(&e))
        return kExitValidation;
    if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
    if (dynamic_cast<const HypothesisViolated*>(&e)) return kExitVerification;
    return 1;
}

RunOutcome run(const RunConfig& cfg, const RunFlags& flags, std::ostream& log) {
    RunOutcome outcome;
    Writer out{cfg.output_dir, outcome};
    try {
        switch (cfg.mode) {
            case RunMode::Verify: outcome.exit_code = run_verify(cfg, out, log); break;
            case RunMode::Solve: outcome.exit_code = run_solve(cfg, flags, out, log); break;
            case RunMode::Sweep: outcome.exit_code = run_sweep(cfg, out, log); break;
            case RunMode::Diagnose: outcome.exit_code = run_diagnose(cfg, out, log); break;
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        outcome.exit_code = exit_code_for(e);
    }
    return outcome;
}

}  // namespace pfrac
