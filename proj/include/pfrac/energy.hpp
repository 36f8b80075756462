#pragma once

// Reduced trace-space functional
//
//   I_m(u) = 1/2 sum_k [(w^2|k|^2 + m^2)^s - m^{2s}] |c_k|^2 - int F(x, u) dx,
//
// which is the extension functional J_m on Ext(u) with kappa_s normalized to 1.

#include "pfrac/nonlinearity.hpp"
#include "pfrac/spectral.hpp"

#include <vector>

namespace pfrac {

struct EnergyReport {
    double value = 0.0;      // quad - nl
    double quad = 0.0;       // quadratic part
    double nl = 0.0;         // int F(x, u)
    double grad_norm = 0.0;  // H^{-s} norm of the L2 residual (= H^s norm of the X-gradient)
};

enum class Metric { L2, X };

/// 1 / (w^2|k|^2 + m^2)^s per slot, with weight 1 where the multiplier
/// vanishes (k = 0 at m = 0).
std::vector<double> dual_weights(const TorusGrid& grid, const FracParams& params);
/// sqrt(sum_k dual_weight_k |r_k|^2)
double dual_norm(const Spectrum& r, const FracParams& params);

double quadratic_part(const Spectrum& u, const FracParams& params);
EnergyReport evaluate(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec);

/// L2: R(u) = [(w^2|k|^2+m^2)^s - m^{2s}] c_k - f(., u)_k.
/// X:  R_k dual_weight_k (the Sobolev-preconditioned gradient).
Spectrum gradient(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec,
                  Metric metric = Metric::L2);

/// sum_k [(w^2|k|^2+m^2)^s - m^{2s}] |c_k|^2 / ||u||^2_{H^s} for zero-mean u != 0.
/// Throws DomainError for nonzero mean (beyond 1e-12 ||u||) or u = 0.
double quadratic_gap(const Spectrum& u, const FracParams& params);
/// 1 - m^{2s} / (w^2 + m^2)^s, the smallest ratio over modes |k| >= 1.
double coercivity_constant(const TorusGrid& grid, const FracParams& params);

}  // namespace pfrac
