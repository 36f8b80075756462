#pragma once

#include <vector>

namespace pfrac {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule on [0,1] for the weight t^beta (1-t)^alpha,
/// alpha, beta > -1. Nodes from the Golub-Welsch matrix, polished by Newton
/// on the orthonormal recurrence; weights are Christoffel numbers.
QuadratureRule gauss_jacobi_unit(int n, double alpha, double beta);

/// Rule for int_0^inf y^gamma g(y) dy.
///
/// Uses y = -scale * log(1-t) and Gauss-Jacobi nodes for the endpoint
/// weight t^beta; the remaining factor y^gamma t^{-beta} scale/(1-t) is
/// folded into the returned weights, so the integral is sum_i w_i g(y_i).
/// Choose beta to match the integrand's algebraic behaviour at y = 0 and
/// scale ~ 1/(decay rate) so that g decays like a positive power of (1-t).
QuadratureRule half_line_rule(int n, double gamma, double beta, double scale = 1.0);

}  // namespace pfrac
