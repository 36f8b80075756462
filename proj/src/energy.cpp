#include "pfrac/energy.hpp"

#include "pfrac/errors.hpp"

#include <cmath>

namespace pfrac {

std::vector<double> dual_weights(const TorusGrid& grid, const FracParams& params) {
    std::vector<double> w = bessel_multipliers(grid, params);
    for (double& v : w) v = v == 0.0 ? 1.0 : 1.0 / v;
    return w;
}

double dual_norm(const Spectrum& r, const FracParams& params) {
    const auto w = dual_weights(r.grid(), params);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) sum += w[i] * std::norm(r[i]);
    return std::sqrt(sum);
}

double quadratic_part(const Spectrum& u, const FracParams& params) {
    const auto mult = shifted_multipliers(u.grid(), params);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += mult[i] * std::norm(u[i]);
    return 0.5 * sum;
}

EnergyReport evaluate(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec) {
    EnergyReport r;
    r.quad = quadratic_part(u, params);
    r.nl = nonlinear_energy_padded(spec, u);
    r.value = r.quad - r.nl;
    r.grad_norm = dual_norm(gradient(u, params, spec, Metric::L2), params);
    return r;
}

Spectrum gradient(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec, Metric metric) {
    Spectrum r = apply_shifted_operator(u, params) - nonlinear_gradient(spec, u);
    if (metric == Metric::L2) return r;
    const auto w = dual_weights(u.grid(), params);
    std::vector<Complex> out(r.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = w[i] * r[i];
    return Spectrum(u.grid(), std::move(out));
}

double quadratic_gap(const Spectrum& u, const FracParams& params) {
    const double norm = l2_norm(u);
    if (norm == 0.0) throw DomainError("coercivity ratio of the zero spectrum");
    if (std::abs(u[0]) > 1e-12 * norm) throw DomainError("coercivity ratio needs a zero-mean spectrum");
    const double h = hs_norm(u, params);
    return 2.0 * quadratic_part(u, params) / (h * h);
}

double coercivity_constant(const TorusGrid& grid, const FracParams& params) {
    const double w = grid.omega();
    return 1.0 - params.mass_term() / params.bessel_multiplier(w * w);
}

}  // namespace pfrac
