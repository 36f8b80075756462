#include "pfrac/theta.hpp"

#include "pfrac/bessel.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace pfrac {
namespace {

constexpr double kUnderflowArgument = 700.0;

void require_positive(double y) {
    if (!(y > 0.0)) throw DomainError("theta profile is defined for y > 0");
}

}  // namespace

double kappa(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("kappa_s requires 0 < s < 1");
    return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

ThetaProfile::ThetaProfile(double s, int quadrature_nodes)
    : s_(s), scale_(0.0), half_(s == 0.5) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("theta profile requires 0 < s < 1");
    scale_ = std::pow(2.0, 1.0 - s) / std::tgamma(s);

    const double beta = 1.0 - 2.0 * s;
    const QuadratureRule value_rule = half_line_rule(quadrature_nodes, beta, beta);
    for (std::size_t i = 0; i < value_rule.nodes.size(); ++i) {
        const double t = theta(value_rule.nodes[i]);
        value_integral_ += value_rule.weights[i] * t * t;
    }
    // y^{1-2s} theta'^2 = y^{2s-1} (y^{1-2s} theta')^2 and the bracket is
    // bounded near 0, so this piece carries the weight y^{2s-1}.
    const QuadratureRule slope_rule = half_line_rule(quadrature_nodes, -beta, -beta);
    for (std::size_t i = 0; i < slope_rule.nodes.size(); ++i) {
        const double g = conormal_profile(slope_rule.nodes[i]);
        slope_integral_ += slope_rule.weights[i] * g * g;
    }
}

double ThetaProfile::theta(double y) const {
    require_positive(y);
    if (half_) return std::exp(-y);
    if (y > kUnderflowArgument) return 0.0;
    return scale_ * std::pow(y, s_) * bessel_k(s_, y).k_nu;
}

double ThetaProfile::theta_prime(double y) const {
    require_positive(y);
    if (half_) return -std::exp(-y);
    if (y > kUnderflowArgument) return 0.0;
    return -scale_ * std::pow(y, s_) * bessel_k(1.0 - s_, y).k_nu;
}

double ThetaProfile::theta_second(double y) const {
    require_positive(y);
    if (half_) return std::exp(-y);
    if (y > kUnderflowArgument) return 0.0;
    const BesselKPair k = bessel_k(1.0 - s_, y);
    return scale_ * std::pow(y, s_) * (k.k_next - k.k_nu / y);
}

double ThetaProfile::conormal_profile(double y) const {
    require_positive(y);
    if (half_) return std::exp(-y);
    if (y > kUnderflowArgument) return 0.0;
    return scale_ * std::pow(y, 1.0 - s_) * bessel_k(1.0 - s_, y).k_nu;
}

double ThetaProfile::ode_residual(double y) const {
    require_positive(y);
    return std::abs(theta_second(y) + (1.0 - 2.0 * s_) / y * theta_prime(y) - theta(y));
}

std::vector<double> conormal_exponents(double s, std::size_t count) {
    std::vector<double> candidates;
    for (std::size_t j = 0; j <= count; ++j) {
        candidates.push_back(2.0 - 2.0 * s + 2.0 * j);
        candidates.push_back(2.0 * (j + 1));
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<double> out;
    for (double c : candidates) {
        if (!out.empty() && std::abs(c - out.back()) < 1e-12) continue;
        out.push_back(c);
        if (out.size() == count) break;
    }
    return out;
}

RichardsonResult richardson_limit(std::span<const double> ys, std::span<const double> values,
                                  std::span<const double> exponents) {
    if (ys.size() != values.size() || ys.empty()) throw ParameterError("richardson: size mismatch");
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
        if (!(ys[i] > ys[i + 1] && ys[i + 1] > 0.0))
            throw ParameterError("richardson: y samples must be positive and decreasing");

    std::vector<double> row(values.begin(), values.end());
    RichardsonResult result;
    result.levels.push_back(row.back());
    const std::size_t depth = std::min(exponents.size(), ys.size() - 1);
    for (std::size_t level = 0; level < depth; ++level) {
        const double p = exponents[level];
        std::vector<double> next(row.size() - 1);
        for (std::size_t i = 0; i + 1 < row.size(); ++i) {
            const double a = std::pow(ys[i], p);
            const double b = std::pow(ys[i + 1], p);
            next[i] = (row[i + 1] * a - row[i] * b) / (a - b);
        }
        row = std::move(next);
        result.levels.push_back(row.back());
    }
    result.estimate = result.levels.back();

    double scale = 0.0;
    for (double v : result.levels) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 2; j < result.levels.size(); ++j) {
        const double prev = std::abs(result.levels[j - 1] - result.levels[j - 2]);
        const double curr = std::abs(result.levels[j] - result.levels[j - 1]);
        if (curr > prev + 1e-13 * scale) result.cauchy = false;
    }
    return result;
}

double conormal_limit_check(const ThetaProfile& profile, std::span<const double> y_list) {
    std::vector<double> values;
    values.reserve(y_list.size());
    for (double y : y_list) values.push_back(profile.conormal_profile(y));
    const auto exponents = conormal_exponents(profile.s(), y_list.size());
    return richardson_limit(y_list, values, exponents).estimate;
}

ThetaBounds theta_bounds(const ThetaProfile& profile, std::span<const double> samples) {
    ThetaBounds b{0.0, 0.0};
    for (double y : samples) {
        b.max_theta = std::max(b.max_theta, profile.theta(y));
        b.max_conormal = std::max(b.max_conormal, profile.conormal_profile(y));
    }
    return b;
}

}  // namespace pfrac
