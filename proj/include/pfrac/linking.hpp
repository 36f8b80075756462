#pragma once

// Numerical linking: X = Y (+) Z with Y the constants and Z the zero-mean
// traces, the linking set A = {c e0 + r z : |c| <= R', 0 <= r <= R}, and a
// minimax deformation of A toward a critical point of I_m.
//
// The deformed surface keeps the boundary of A fixed and replaces the
// interior by the sheet {a e0 + r w} over a moving zero-mean direction w
// (||w||_{H^s} = 1). Each sweep maximizes I_m over the sheet by a 2-D Newton
// iteration and then moves w along the negative X-gradient at the maximizer
// with Armijo backtracking. The sweep maximum is the current minimax
// estimate; a stationary direction w is a critical point of I_m.

#include "pfrac/energy.hpp"
#include "pfrac/nonlinearity.hpp"
#include "pfrac/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pfrac {

struct Decomposition {
    Spectrum y_part;  // mean mode
    Spectrum z_part;  // zero-mean remainder
};

Decomposition decompose(const Spectrum& u);

/// Spectrum of prod_i sin(w x_i), normalized to ||z||_{H^s} = 1.
Spectrum pick_z_direction(const TorusGrid& grid, const FracParams& params);

/// The constant mode with unit L2 norm (c_0 = 1).
Spectrum y_direction(const TorusGrid& grid);

struct RidgeEstimate {
    double eta = 0.0;  // radius of the best sphere
    double rho = 0.0;  // sampled inf of I_m on that sphere
    std::vector<std::pair<double, double>> profile;  // (radius, sampled inf)
};

/// Sampled inf of I_m over zero-mean directions on H^s spheres of the given
/// radii: random directions, the lowest Fourier modes, and a projected
/// descent polish of the best sample. Throws NoPositiveRidge if every
/// sampled inf is <= 0.
RidgeEstimate ridge_estimate(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                             const std::vector<double>& probe_radii, std::uint64_t seed,
                             int random_directions = 32);
std::vector<double> default_probe_radii();

struct LinkingConfig {
    double ray_cap = 4.0;  // R
    double y_cap = 4.0;    // R'
    int n_c = 21;
    int n_r = 21;
    double descent_step = 1.0;
    double ps_tol = 1e-8;
    int max_iters = 2000;
    std::uint64_t seed = 0;
    std::vector<double> probe_radii = default_probe_radii();
    int random_directions = 32;

    /// Throws ParameterError on nonpositive sizes or tolerances.
    void validate() const;
};

enum class SolverStatus { Converged, MaxIters, NoNontrivialSolution };
std::string to_string(SolverStatus status);

struct SweepRecord {
    int sweep = 0;
    double level = 0.0;  // minimax estimate after this sweep (non-increasing)
    double grad_norm = 0.0;
    double arg_c = 0.0;  // maximizer on the surface, Y coordinate
    double arg_r = 0.0;  // maximizer on the surface, ray coordinate
};

/// Parameterization of the deformed linking surface.
struct LinkingSurface {
    double ray_cap = 0.0;
    double y_cap = 0.0;
    int n_c = 0;
    int n_r = 0;
    Spectrum z;  // boundary direction, never modified
    Spectrum w;  // interior sheet direction

    /// Parameter of grid node (i, j): (c_i, r_j).
    std::pair<double, double> parameter(int i, int j) const;
    bool on_boundary(int i, int j) const;
    /// Image of node (i, j): c e0 + r z on the boundary, c e0 + r w inside.
    Spectrum point(int i, int j) const;
};

struct SolverState {
    Spectrum iterate;
    double level = 0.0;
    double grad_norm = 0.0;
    std::vector<SweepRecord> history;
    SolverStatus status = SolverStatus::MaxIters;
    double rho = 0.0;        // ridge estimate
    double eta = 0.0;
    double delta_hat = 0.0;  // max of I_m over the undeformed A (linking_set_max)
    LinkingSurface surface;
};

SolverState minimax_search(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                           const LinkingConfig& cfg);
/// Same, with an explicit boundary direction z (zero mean, normalized here).
SolverState minimax_search(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                           const LinkingConfig& cfg, const Spectrum& z);

/// Throws MaxItersReached unless the state converged.
void require_converged(const SolverState& state);

/// Samples of I_m over the grid nodes of the surface.
std::vector<double> surface_levels(const LinkingSurface& surface, const FracParams& params,
                                   const NonlinearitySpec& spec);

/// Max of I_m over A = {c e0 + r z : |c| <= y_cap, 0 <= r <= ray_cap}: the
/// sampled max on an n_c x n_r grid, polished by Newton when the polished
/// point stays inside A.
double linking_set_max(const Spectrum& z, double ray_cap, double y_cap, int n_c, int n_r, const FracParams& params,
                       const NonlinearitySpec& spec);

/// ||apply_shifted_operator(u) - f(., u)|| in H^{-s} (dual weights, 1 at a
/// vanishing multiplier).
double residual_norm(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec);

struct RefineResult {
    Spectrum solution;
    int iterations = 0;
    double residual_l2 = 0.0;
    double level_change = 0.0;  // |I(final) - I(previous iterate)|
};

/// Newton iteration on R(u) = 0 with inner preconditioned MINRES (the
/// preconditioner is the Bessel multiplier). Stops when ||R||_{L2} < tol.
/// Throws DivergedRefinement after 5 consecutive residual increases.
RefineResult newton_refine(const Spectrum& u0, const FracParams& params, const NonlinearitySpec& spec,
                           double tol, int max_iters = 50);

}  // namespace pfrac
