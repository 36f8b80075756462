#pragma once

// The m -> 0 program: Sobolev constant and the mass threshold m0, a warm
// started sweep of linking solves over decreasing m, extraction of the
// m = 0 limit solution, and integrability / regularity diagnostics.

#include "pfrac/linking.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pfrac {

struct SobolevEstimate {
    Spectrum maximizer;    // zero-mean, unit homogeneous H^s norm
    double q = 0.0;        // exponent of the L^q norm in the quotient
    double C_sharp = 0.0;  // best discrete quotient found
    double m0 = 0.0;       // 1 / (2 C_sharp^2)
};

/// Exponent used for the Sobolev quotient: 2#_s when finite, else p + 1.
double sobolev_exponent(int dim, const FracParams& params, const NonlinearitySpec& spec);

/// Maximizes |u|_{L^q} / (sum_{k != 0} w^{2s} |k|^{2s} |c_k|^2)^{1/2} over
/// zero-mean band-limited u by projected ascent from `starts` random
/// directions, cos(w x_1), and `warm_start` (resampled) if given. L^q norms
/// are taken on a 4x oversampled grid. The mass in `params` is ignored.
SobolevEstimate estimate_sobolev_constant(const TorusGrid& grid, const FracParams& params, double q,
                                          std::uint64_t seed, int starts = 10,
                                          const std::optional<Spectrum>& warm_start = std::nullopt);

struct ContinuationRecord {
    Spectrum solution;
    double m = 0.0;
    std::string status{};  // SolverStatus name, or the error class for a failed solve
    std::string detail{};  // error message when the solve threw
    double alpha = 0.0;  // critical level
    double hs_norm_T = 0.0;  // H^s norm with m = 1 weights
    double l2_norm = 0.0;
    double residual = 0.0;   // H^{-s} residual at this m
    double rho = 0.0;
    double delta_hat = 0.0;

    bool converged() const { return status == "Converged"; }
};

struct SweepResult {
    double s = 0.0;
    std::vector<ContinuationRecord> records;
    double lambda_hat = 0.0;  // min rho over converged records
    double delta_hat = 0.0;   // max of I over the linking sets, including the last one at m = 0
    double max_hs_norm = 0.0;
    double max_l2_norm = 0.0;
    double alpha_spread = 0.0;      // max alpha / min alpha
    bool envelope_holds = false;    // every alpha in [lambda_hat, delta_hat]
    bool bounded = false;           // last / first hs_norm_T < 10
};

/// Linking solve at each m of a decreasing list in (0, m0), warm started
/// from the previous solution (its zero-mean part becomes the boundary
/// direction z). A failed m is recorded and skipped. Throws ParameterError
/// if the list is not decreasing or leaves (0, m0).
SweepResult sweep_m(const TorusGrid& grid, const std::vector<double>& m_list, double s,
                    const NonlinearitySpec& spec, const LinkingConfig& cfg, double m0);

struct LimitResult {
    Spectrum solution;
    double residual = 0.0;       // H^{-s} residual of (-Delta)^s u - f(., u)
    double level = 0.0;          // I_0(u)
    double hs_norm = 0.0;        // m = 1 weights
    double nontriviality = 0.0;  // int f(x, u) u dx
    bool in_envelope = false;    // level within [lambda_hat, delta_hat]
};

/// Refines the smallest-m converged solution by Newton at m = 0. Needs at
/// least two converged records (ParameterError otherwise). Throws
/// LimitCollapsed if the result is trivial or int f(x,u) u < 2 lambda_hat -
/// tol, NotCauchy if the branch jumps by more than 10x its trend in m^{2s},
/// DivergedRefinement if Newton fails.
LimitResult extract_limit(const SweepResult& sweep, const NonlinearitySpec& spec, double tol);

/// 2 (N / (N - 2s))^k for k = 0, 1, ... up to q_max; only {2} when N = 2s.
std::vector<double> bootstrap_ladder(int dim, double s, double q_max);

struct BootstrapRow {
    double q = 0.0;
    double norm = 0.0;
    bool on_ladder = false;
};

struct BootstrapReport {
    std::vector<BootstrapRow> rows;  // one per q, ascending
    double growth = 0.0;             // max ratio of consecutive norms
};

/// |u|_{L^q} on a 4x oversampled grid for each q in q_list (all >= 2).
BootstrapReport bootstrap_diagnostic(const Spectrum& u, const std::vector<double>& q_list, double s);

struct HolderProxy {
    double alpha = 0.0;           // modulus-of-continuity fit, clamped to [0.001, 0.999]
    double spectral_alpha = 0.0;  // decay fit |c_k| ~ |k|^{-(alpha + N/2)}, unclamped
};

/// Diagnostic only. Throws InsufficientDecay if more than 10% of the energy
/// sits in the top half of the band, DomainError for u = 0.
HolderProxy holder_proxy(const Spectrum& u);

}  // namespace pfrac
