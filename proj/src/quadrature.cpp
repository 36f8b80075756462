#include "pfrac/quadrature.hpp"

#include "pfrac/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace pfrac {
namespace {

// Recurrence coefficients of the monic Jacobi polynomials shifted to [0,1]
// (weight t^beta (1-t)^alpha): p_{j+1} = (t - diag_j) p_j - offsq_j p_{j-1}.
struct ShiftedJacobi {
    double alpha;
    double beta;

    double diag(int j) const {
        const double ab = alpha + beta;
        double a;
        if (j == 0) {
            a = (beta - alpha) / (ab + 2.0);
        } else {
            const double t = 2.0 * j + ab;
            a = (beta * beta - alpha * alpha) / (t * (t + 2.0));
        }
        return 0.5 * (1.0 + a);
    }

    // offsq(j) couples p_j and p_{j-1}; valid for j >= 1.
    double offsq(int j) const {
        const double ab = alpha + beta;
        double b;
        if (j == 1) {
            b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            const double t = 2.0 * j + ab;
            b = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0));
        }
        return 0.25 * b;
    }

    double log_mass() const {
        // int_0^1 t^beta (1-t)^alpha dt
        return std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0);
    }
};

struct OrthoEval {
    double value;
    double derivative;
    double sum_sq;  // sum_{j<n} p_j(t)^2 for the orthonormal family
};

OrthoEval orthonormal(const ShiftedJacobi& rec, int n, double t) {
    double p_prev = 0.0;
    double p = std::exp(-0.5 * rec.log_mass());
    double d_prev = 0.0;
    double d = 0.0;
    double sum_sq = 0.0;
    double sqrt_b = 0.0;
    for (int j = 0; j < n; ++j) {
        sum_sq += p * p;
        const double sqrt_next = std::sqrt(rec.offsq(j + 1));
        const double shift = t - rec.diag(j);
        const double p_next = (shift * p - sqrt_b * p_prev) / sqrt_next;
        const double d_next = (p + shift * d - sqrt_b * d_prev) / sqrt_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        sqrt_b = sqrt_next;
    }
    return {p, d, sum_sq};
}

}  // namespace

QuadratureRule gauss_jacobi_unit(int n, double alpha, double beta) {
    if (n < 1) throw ParameterError("quadrature needs at least one node");
    if (!(alpha > -1.0) || !(beta > -1.0)) throw ParameterError("Jacobi exponents must exceed -1");
    const ShiftedJacobi rec{alpha, beta};

    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int j = 0; j < n; ++j) diag(j) = rec.diag(j);
    for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(rec.offsq(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("Golub-Welsch eigenvalue solve failed");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = solver.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            const OrthoEval e = orthonormal(rec, n, t);
            if (e.derivative == 0.0) break;
            const double step = e.value / e.derivative;
            t -= step;
            if (std::abs(step) <= 1e-16 * std::abs(t)) break;
        }
        rule.nodes[i] = t;
        rule.weights[i] = 1.0 / orthonormal(rec, n, t).sum_sq;
    }
    return rule;
}

QuadratureRule half_line_rule(int n, double gamma, double beta, double scale) {
    if (!(scale > 0.0)) throw ParameterError("half-line rule scale must be positive");
    QuadratureRule base = gauss_jacobi_unit(n, 0.0, beta);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = base.nodes[i];
        const double y = -scale * std::log1p(-t);
        rule.nodes[i] = y;
        rule.weights[i] = base.weights[i] * std::pow(y, gamma) * std::pow(t, -beta) * scale / (1.0 - t);
    }
    return rule;
}

}  // namespace pfrac
