#include "pfrac/extension.hpp"

#include "pfrac/errors.hpp"
#include "pfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace pfrac {
namespace {

double mode_rate(const TorusGrid& grid, const FracParams& params, std::size_t flat) {
    const double w = grid.omega();
    return std::sqrt(w * w * grid.wavenumber_sq(flat) + params.m() * params.m());
}

// Applies a real per-mode factor that depends only on lambda_k.
template <typename Fn>
Spectrum scale_modes(const Spectrum& base, const FracParams& params, Fn&& factor) {
    const TorusGrid& grid = base.grid();
    std::map<double, double> cache;
    std::vector<Complex> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] == Complex(0.0, 0.0)) continue;
        const double lambda = mode_rate(grid, params, i);
        auto it = cache.find(lambda);
        if (it == cache.end()) it = cache.emplace(lambda, factor(lambda)).first;
        out[i] = it->second * base[i];
    }
    return Spectrum(grid, std::move(out));
}

YRule to_y_rule(const QuadratureRule& rule) { return {rule.nodes, rule.weights}; }

double row_gradient_energy(std::span<const double> row, const TorusGrid& grid, const FracParams& params) {
    const Spectrum c = forward_transform(Field(grid, std::vector<double>(row.begin(), row.end())));
    const double w2 = grid.omega() * grid.omega();
    const double m2 = params.m() * params.m();
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) sum += (w2 * grid.wavenumber_sq(i) + m2) * std::norm(c[i]);
    return sum;
}

double row_square_integral(std::span<const double> row, double cell) {
    double sum = 0.0;
    for (double v : row) sum += v * v;
    return sum * cell;
}

void check_exponent(const CylinderFunction& v, const FracParams& params) {
    if (std::abs(v.s - params.s()) > 1e-15)
        throw ParameterError("cylinder function sampled for a different exponent s");
}

}  // namespace

ExtensionField::ExtensionField(Spectrum base, FracParams params, std::shared_ptr<const ThetaProfile> profile)
    : base_(std::move(base)), params_(params), profile_(std::move(profile)) {
    if (!profile_) throw ParameterError("extension needs a theta profile");
    if (std::abs(profile_->s() - params_.s()) > 1e-15)
        throw ParameterError("theta profile exponent differs from the operator exponent");
}

double ExtensionField::rate(std::size_t flat) const { return mode_rate(base_.grid(), params_, flat); }

Spectrum ExtensionField::slice(double y) const {
    if (y < 0.0) throw DomainError("extension is defined for y >= 0");
    if (y == 0.0) return base_;
    return scale_modes(base_, params_, [&](double lambda) {
        return lambda == 0.0 ? 1.0 : profile_->theta(lambda * y);
    });
}

Spectrum ExtensionField::slice_dy(double y) const {
    if (!(y > 0.0)) throw DomainError("y-derivative of the extension needs y > 0");
    return scale_modes(base_, params_, [&](double lambda) {
        return lambda == 0.0 ? 0.0 : lambda * profile_->theta_prime(lambda * y);
    });
}

double ExtensionField::value(const Point& x, double y) const {
    const Spectrum c = slice(y);
    const TorusGrid& grid = c.grid();
    const double w = grid.omega();
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == Complex(0.0, 0.0)) continue;
        const Wavevector k = grid.wavenumber(i);
        double phase = 0.0;
        for (int d = 0; d < grid.dim(); ++d) phase += w * k[d] * x[d];
        sum += (c[i] * Complex(std::cos(phase), std::sin(phase))).real();
    }
    return sum / std::sqrt(std::pow(grid.period(), grid.dim()));
}

ExtensionField extend(const Spectrum& u, const FracParams& params,
                      std::shared_ptr<const ThetaProfile> profile) {
    if (params.m() == 0.0 && std::abs(u[0]) > 1e-12 * l2_norm(u))
        throw ZeroModeNoDecay("constant mode has no decaying extension at m = 0");
    return ExtensionField(u, params, std::move(profile));
}

ExtensionField extend(const Spectrum& u, const FracParams& params) {
    return extend(u, params, std::make_shared<const ThetaProfile>(params.s()));
}

std::span<const double> CylinderFunction::value_row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * grid.size(), grid.size());
}

std::span<const double> CylinderFunction::slope_row(std::size_t r) const {
    return std::span<const double>(dy_values).subspan(r * grid.size(), grid.size());
}

YRule value_y_rule(double s, int nodes, double scale) {
    return to_y_rule(half_line_rule(nodes, 1.0 - 2.0 * s, 1.0 - 2.0 * s, scale));
}

YRule slope_y_rule(double s, int nodes, double scale) {
    return to_y_rule(half_line_rule(nodes, 1.0 - 2.0 * s, 2.0 * s - 1.0, scale));
}

ProfileFamily theta_family(std::shared_ptr<const ThetaProfile> profile) {
    ProfileFamily f;
    f.value = [profile](double lambda, double y) { return profile->theta(lambda * y); };
    f.slope = [profile](double lambda, double y) { return lambda * profile->theta_prime(lambda * y); };
    return f;
}

ProfileFamily exponential_family(double factor) {
    if (!(factor > 0.0)) throw ParameterError("exponential profile needs a positive decay factor");
    ProfileFamily f;
    f.value = [factor](double lambda, double y) { return std::exp(-factor * lambda * y); };
    f.slope = [factor](double lambda, double y) { return -factor * lambda * std::exp(-factor * lambda * y); };
    f.decay = factor;
    return f;
}

CylinderFunction sample_separable(const Spectrum& trace, const FracParams& params,
                                  const ProfileFamily& family, int nodes) {
    const TorusGrid& grid = trace.grid();
    double slowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i] == Complex(0.0, 0.0)) continue;
        const double lambda = mode_rate(grid, params, i);
        if (lambda == 0.0) throw ZeroModeNoDecay("constant mode has no decaying profile at m = 0");
        slowest = std::min(slowest, lambda);
    }
    if (!std::isfinite(slowest)) slowest = 1.0;
    const double scale = 1.0 / (family.decay * slowest);

    CylinderFunction v{grid, params.s(), value_y_rule(params.s(), nodes, scale), {},
                       slope_y_rule(params.s(), nodes, scale), {}, std::nullopt};
    v.values.reserve(v.value_rule.nodes.size() * grid.size());
    v.dy_values.reserve(v.slope_rule.nodes.size() * grid.size());
    for (double y : v.value_rule.nodes) {
        const Field row = inverse_transform(scale_modes(trace, params, [&](double l) { return family.value(l, y); }));
        v.values.insert(v.values.end(), row.values().begin(), row.values().end());
    }
    for (double y : v.slope_rule.nodes) {
        const Field row = inverse_transform(scale_modes(trace, params, [&](double l) { return family.slope(l, y); }));
        v.dy_values.insert(v.dy_values.end(), row.values().begin(), row.values().end());
    }
    const Field tr = inverse_transform(trace);
    v.trace = std::vector<double>(tr.values().begin(), tr.values().end());
    return v;
}

CylinderFunction sample_extension(const ExtensionField& v, int nodes) {
    return sample_separable(v.base(), v.params(), theta_family(v.shared_profile()), nodes);
}

double cylinder_energy(const ExtensionField& v) {
    const auto mult = bessel_multipliers(v.base().grid(), v.params());
    double sum = 0.0;
    for (std::size_t i = 0; i < mult.size(); ++i) sum += mult[i] * std::norm(v.base()[i]);
    return v.profile().energy_integral() * sum;
}

double cylinder_energy(const CylinderFunction& v, const FracParams& params) {
    check_exponent(v, params);
    const double cell = v.grid.cell_volume();
    double sum = 0.0;
    for (std::size_t r = 0; r < v.value_rule.nodes.size(); ++r)
        sum += v.value_rule.weights[r] * row_gradient_energy(v.value_row(r), v.grid, params);
    for (std::size_t r = 0; r < v.slope_rule.nodes.size(); ++r)
        sum += v.slope_rule.weights[r] * row_square_integral(v.slope_row(r), cell);
    return sum;
}

double cylinder_energy(const Spectrum& trace, const FracParams& params, const ProfileFamily& family, int nodes) {
    const double coarse = cylinder_energy(sample_separable(trace, params, family, nodes), params);
    const double fine = cylinder_energy(sample_separable(trace, params, family, nodes + nodes / 2), params);
    if (std::abs(fine - coarse) > 1e-6 * std::abs(fine))
        throw QuadratureUnconverged("cylinder energy changed by " + std::to_string(std::abs(fine - coarse)) +
                                    " between " + std::to_string(nodes) + " and " +
                                    std::to_string(nodes + nodes / 2) + " nodes");
    return fine;
}

Field cylinder_trace(const CylinderFunction& v) {
    if (v.trace) return Field(v.grid, *v.trace);
    if (v.value_rule.nodes.size() < 2) throw DomainError("trace extrapolation needs two y nodes");
    const double y0 = v.value_rule.nodes[0];
    const double y1 = v.value_rule.nodes[1];
    const auto r0 = v.value_row(0);
    const auto r1 = v.value_row(1);
    std::vector<double> out(v.grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = r0[j] - y0 * (r1[j] - r0[j]) / (y1 - y0);
    return Field(v.grid, std::move(out));
}

double sharp_trace_gap(const CylinderFunction& v, const FracParams& params) {
    const double energy = cylinder_energy(v, params);
    const double h = hs_norm(forward_transform(cylinder_trace(v)), params);
    return energy - kappa(params.s()) * h * h;
}

double ground_gap(const CylinderFunction& v, const FracParams& params) {
    if (params.m() == 0.0) throw DomainError("ground-state gap needs m > 0");
    const double energy = cylinder_energy(v, params);
    const double l2 = lq_norm(cylinder_trace(v), 2.0);
    return energy - kappa(params.s()) * params.mass_term() * l2 * l2;
}

Spectrum conormal_derivative(const ExtensionField& v, std::span<const double> y_list) {
    const double s = v.params().s();
    const auto exponents = conormal_exponents(s, y_list.size());
    const auto mult = bessel_multipliers(v.base().grid(), v.params());
    double total = 0.0;
    for (std::size_t i = 0; i < mult.size(); ++i) total += mult[i] * std::norm(v.base()[i]);

    std::vector<double> scaled(y_list.size());
    std::vector<double> samples(y_list.size());
    std::map<double, RichardsonResult> cache;
    std::vector<Complex> out(v.base().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Complex c = v.base()[i];
        if (c == Complex(0.0, 0.0)) continue;
        const double lambda = v.rate(i);
        if (lambda == 0.0) continue;
        auto it = cache.find(lambda);
        if (it == cache.end()) {
            for (std::size_t j = 0; j < y_list.size(); ++j) {
                scaled[j] = lambda * y_list[j];
                samples[j] = v.profile().conormal_profile(scaled[j]);
            }
            it = cache.emplace(lambda, richardson_limit(scaled, samples, exponents)).first;
        }
        if (!it->second.cauchy && mult[i] * std::norm(c) >= 1e-8 * total)
            throw ExtrapolationDiverged("conormal extrapolation not Cauchy at lambda = " + std::to_string(lambda));
        out[i] = std::pow(lambda, 2.0 * s) * it->second.estimate * c;
    }
    return Spectrum(v.base().grid(), std::move(out));
}

Field interior_residual(const ExtensionField& v, double y) {
    if (!(y > 0.0)) throw DomainError("interior residual needs y > 0");
    const double s = v.params().s();
    const ThetaProfile& p = v.profile();
    const double weight = std::pow(y, 1.0 - 2.0 * s);
    const Spectrum r = scale_modes(v.base(), v.params(), [&](double lambda) {
        if (lambda == 0.0) return 0.0;
        const double t = lambda * y;
        const double ode = p.theta_second(t) + (1.0 - 2.0 * s) / t * p.theta_prime(t) - p.theta(t);
        return -weight * lambda * lambda * ode;
    });
    return inverse_transform(r);
}

}  // namespace pfrac
