#pragma once

// The extension profile theta(y) = (2/Gamma(s)) (y/2)^s K_s(y).
//
// theta solves theta'' + ((1-2s)/y) theta' - theta = 0 with theta(0) = 1 and
// theta(inf) = 0. Each Fourier mode of the harmonic extension is a rescaled
// copy theta(lambda_k y), and
//
//   kappa_s = int_0^inf y^{1-2s} (theta'^2 + theta^2) dy
//           = -lim_{y->0} y^{1-2s} theta'(y)
//           = 2^{1-2s} Gamma(1-s) / Gamma(s).

#include <span>
#include <vector>

namespace pfrac {

/// 2^{1-2s} Gamma(1-s) / Gamma(s). Throws DomainError outside (0,1).
double kappa(double s);

/// Immutable evaluator for theta, theta', theta'' at a fixed exponent s.
class ThetaProfile {
public:
    /// quadrature_nodes sets the Gauss-Jacobi size used for the profile integrals.
    explicit ThetaProfile(double s, int quadrature_nodes = 200);

    double s() const noexcept { return s_; }

    double theta(double y) const;
    /// theta'(y) = -(2/Gamma(s)) (y/2)^s K_{1-s}(y) < 0.
    double theta_prime(double y) const;
    /// theta'' from K_{1-s} and K_{2-s}; independent of the theta route.
    double theta_second(double y) const;
    /// -y^{1-2s} theta'(y), which tends to kappa_s as y -> 0.
    double conormal_profile(double y) const;

    /// |theta'' + ((1-2s)/y) theta' - theta|
    double ode_residual(double y) const;

    /// int_0^inf y^{1-2s} theta^2 dy, by weighted quadrature.
    double value_integral() const noexcept { return value_integral_; }
    /// int_0^inf y^{1-2s} theta'^2 dy, by weighted quadrature.
    double slope_integral() const noexcept { return slope_integral_; }
    /// value_integral + slope_integral; equals kappa(s) up to quadrature error.
    double energy_integral() const noexcept { return value_integral_ + slope_integral_; }

private:
    double s_;
    double scale_;  // 2^{1-s} / Gamma(s)
    bool half_;     // s == 1/2 closed form e^{-y}
    double value_integral_ = 0.0;
    double slope_integral_ = 0.0;
};

struct RichardsonResult {
    double estimate = 0.0;
    /// Best estimate after each elimination level (index 0 = raw value at
    /// the smallest y).
    std::vector<double> levels;
    /// Corrections did not grow from one level to the next.
    bool cauchy = true;
};

/// Powers of y in the small-y expansion of -y^{1-2s} theta'(y):
/// {2-2s + 2j} U {2j : j >= 1}, ascending.
std::vector<double> conormal_exponents(double s, std::size_t count);

/// Richardson extrapolation to y -> 0 of samples taken at decreasing y,
/// eliminating the given error exponents one level at a time.
RichardsonResult richardson_limit(std::span<const double> ys, std::span<const double> values,
                                  std::span<const double> exponents);

/// Extrapolated -lim y^{1-2s} theta'(y) from samples at y_list (decreasing, positive).
double conormal_limit_check(const ThetaProfile& profile, std::span<const double> y_list);

struct ThetaBounds {
    double max_theta;     // witness for A_s
    double max_conormal;  // witness for B_s / kappa_s, max of -y^{1-2s} theta'
};

/// Empirical bounds over the given sample points; not certified.
ThetaBounds theta_bounds(const ThetaProfile& profile, std::span<const double> samples);

}  // namespace pfrac
