#pragma once

// Power-type nonlinearities f(x,t) = a(x) |t|^{p-1} t and their primitives,
// sampled hypothesis checks, and dealiased pseudospectral evaluation.

#include "pfrac/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pfrac {

enum class NonlinearityKind {
    PurePower,       // |t|^{p-1} t
    ModulatedPower,  // a(x) |t|^{p-1} t
    Zero,            // f = 0; degenerate probe, fails (f5)
    Forcing,         // f = g(x), independent of t; linear probe
};

class NonlinearitySpec {
public:
    /// Requires 1 < p < 2#_s - 1 for the given dimension, 2 < mu <= p + 1 and
    /// r0 > 0; mu defaults to p + 1. Throws ParameterError otherwise.
    static NonlinearitySpec pure_power(double p, int dim, const FracParams& params,
                                       std::optional<double> mu = std::nullopt, double r0 = 1.0);
    /// The coefficient may change sign here; the sign condition is what
    /// verify_hypotheses tests.
    static NonlinearitySpec modulated_power(Field a, double p, const FracParams& params,
                                            std::optional<double> mu = std::nullopt, double r0 = 1.0);
    static NonlinearitySpec zero();
    static NonlinearitySpec forcing(Field g);

    NonlinearityKind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    double mu() const noexcept { return mu_; }
    double r0() const noexcept { return r0_; }
    const std::optional<Field>& coefficient() const noexcept { return coefficient_; }

    /// a(x_j) for the modulated family, g(x_j) for forcing, 1 otherwise.
    double coefficient_at(std::size_t x_index) const;
    double a_min() const;
    double a_max() const;

    double f(std::size_t x_index, double t) const { return f_with(coefficient_at(x_index), t); }
    double F(std::size_t x_index, double t) const { return F_with(coefficient_at(x_index), t); }
    /// d f / d t
    double df(std::size_t x_index, double t) const { return df_with(coefficient_at(x_index), t); }

    // Same, for an explicit coefficient value (a(x) or g(x)).
    double f_with(double coef, double t) const;
    double F_with(double coef, double t) const;
    double df_with(double coef, double t) const;

    /// Points per axis of the dealiasing grid for an n-point solve grid:
    /// at least (ceil(p) + 1) n / 2 for integer p, 3n/2 otherwise, rounded up
    /// to an even number.
    int padded_points(int n) const;

    /// Throws ParameterError unless u's grid matches the coefficient's grid
    /// (x-dependent kinds only).
    void check_grid(const TorusGrid& grid) const;

    /// Coefficient samples on a grid with `points` per axis, by trigonometric
    /// interpolation; empty for x-independent kinds.
    std::vector<double> coefficient_on(int points) const;

private:
    NonlinearitySpec() = default;

    NonlinearityKind kind_ = NonlinearityKind::Zero;
    double p_ = 1.0;
    double mu_ = 2.0;
    double r0_ = 1.0;
    std::optional<Field> coefficient_;
};

struct HypothesisCheck {
    std::string name;  // "f1" ... "f6", "growth(eps=1)", "lower_bound"
    bool passed = false;
    std::string witness;  // first failing sample, empty when passed
    double value = 0.0;   // fitted constant where meaningful
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    double growth_constant = 0.0;             // C of (f4)
    std::vector<std::pair<double, double>> c_eps;  // (eps, C_eps)
    double a3 = 0.0;
    double a4 = 0.0;

    bool all_passed() const;
    const HypothesisCheck* find(const std::string& name) const;
};

/// Sampled checks of (f1)-(f6), the growth bounds with eps in {1, 0.1} and
/// the lower bound F >= a3 |t|^mu - a4. Never throws on a failed check.
HypothesisReport assess_hypotheses(const NonlinearitySpec& spec, const std::vector<double>& t_samples,
                                   const std::vector<std::size_t>& x_samples);
/// As assess_hypotheses, but throws HypothesisViolated at the first failure.
HypothesisReport verify_hypotheses(const NonlinearitySpec& spec, const std::vector<double>& t_samples,
                                   const std::vector<std::size_t>& x_samples);
/// Default t samples: a symmetric ladder covering [-10 r0, 10 r0] plus
/// small |t| down to 1e-8.
std::vector<double> default_t_samples(double r0);

/// Trapezoid rule for int F(x, u(x)) dx on u's own grid.
double nonlinear_energy(const NonlinearitySpec& spec, const Field& u);
/// int F(x, u) dx on the dealiasing grid. This is the nonlinear part of the
/// discrete functional; nonlinear_gradient is its exact gradient.
double nonlinear_energy_padded(const NonlinearitySpec& spec, const Spectrum& u);

/// Spectrum of f(., u) on u's band, Nyquist slots dropped.
Spectrum nonlinear_gradient(const NonlinearitySpec& spec, const Spectrum& u);
/// Spectrum of f_t(., u) w on u's band: the directional derivative of
/// nonlinear_gradient at u along w.
Spectrum nonlinear_jacobian_apply(const NonlinearitySpec& spec, const Spectrum& u, const Spectrum& w);
/// Samples of f_t(x, u(x)) on the dealiasing grid (for repeated Jacobian products).
Field nonlinear_derivative_padded(const NonlinearitySpec& spec, const Spectrum& u);
/// Spectrum of d(x) w(x) with d on the dealiasing grid, truncated to w's band.
Spectrum multiply_padded(const Field& d, const Spectrum& w);

/// Field of f(x_j, u(x_j)) evaluated on a grid with `points` per axis
/// (u resampled); `derivative` selects f_t instead of f.
Field evaluate_padded(const NonlinearitySpec& spec, const Spectrum& u, int points, bool derivative);

}  // namespace pfrac
