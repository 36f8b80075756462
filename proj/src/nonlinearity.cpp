#include "pfrac/nonlinearity.hpp"

#include "pfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pfrac {
namespace {

void validate_exponents(double p, double mu, double r0, int dim, const FracParams& params) {
    params.check_dimension(dim);
    const double upper = params.critical_exponent(dim) - 1.0;
    if (!(p > 1.0) || !(p < upper)) {
        std::ostringstream msg;
        msg << "(f4) requires 1 < p < 2#_s - 1 = " << upper << ", got p = " << p;
        throw ParameterError(msg.str());
    }
    if (!(mu > 2.0) || mu > p + 1.0) {
        std::ostringstream msg;
        msg << "(f5) requires 2 < mu <= p + 1, got mu = " << mu;
        throw ParameterError(msg.str());
    }
    if (!(r0 > 0.0)) throw ParameterError("(f5) requires r0 > 0");
}

bool is_integer(double p) { return std::abs(p - std::round(p)) < 1e-12; }

std::string sample_witness(std::size_t x, double t) {
    std::ostringstream out;
    out.precision(17);
    out << "x_index=" << x << ", t=" << t;
    return out.str();
}

}  // namespace

NonlinearitySpec NonlinearitySpec::pure_power(double p, int dim, const FracParams& params,
                                              std::optional<double> mu, double r0) {
    const double m = mu.value_or(p + 1.0);
    validate_exponents(p, m, r0, dim, params);
    NonlinearitySpec spec;
    spec.kind_ = NonlinearityKind::PurePower;
    spec.p_ = p;
    spec.mu_ = m;
    spec.r0_ = r0;
    return spec;
}

NonlinearitySpec NonlinearitySpec::modulated_power(Field a, double p, const FracParams& params,
                                                   std::optional<double> mu, double r0) {
    const double m = mu.value_or(p + 1.0);
    validate_exponents(p, m, r0, a.grid().dim(), params);
    NonlinearitySpec spec;
    spec.kind_ = NonlinearityKind::ModulatedPower;
    spec.p_ = p;
    spec.mu_ = m;
    spec.r0_ = r0;
    spec.coefficient_ = std::move(a);
    return spec;
}

NonlinearitySpec NonlinearitySpec::zero() {
    NonlinearitySpec spec;
    spec.kind_ = NonlinearityKind::Zero;
    return spec;
}

NonlinearitySpec NonlinearitySpec::forcing(Field g) {
    NonlinearitySpec spec;
    spec.kind_ = NonlinearityKind::Forcing;
    spec.coefficient_ = std::move(g);
    return spec;
}

double NonlinearitySpec::coefficient_at(std::size_t x_index) const {
    if (!coefficient_) return 1.0;
    return (*coefficient_)[x_index];
}

double NonlinearitySpec::a_min() const {
    if (kind_ == NonlinearityKind::Zero) return 0.0;
    if (!coefficient_) return 1.0;
    const auto v = coefficient_->values();
    return *std::min_element(v.begin(), v.end());
}

double NonlinearitySpec::a_max() const {
    if (kind_ == NonlinearityKind::Zero) return 0.0;
    if (!coefficient_) return 1.0;
    const auto v = coefficient_->values();
    return *std::max_element(v.begin(), v.end());
}

double NonlinearitySpec::f_with(double coef, double t) const {
    switch (kind_) {
        case NonlinearityKind::Zero: return 0.0;
        case NonlinearityKind::Forcing: return coef;
        default: return coef * std::pow(std::abs(t), p_ - 1.0) * t;
    }
}

double NonlinearitySpec::F_with(double coef, double t) const {
    switch (kind_) {
        case NonlinearityKind::Zero: return 0.0;
        case NonlinearityKind::Forcing: return coef * t;
        default: return coef * std::pow(std::abs(t), p_ + 1.0) / (p_ + 1.0);
    }
}

double NonlinearitySpec::df_with(double coef, double t) const {
    switch (kind_) {
        case NonlinearityKind::Zero:
        case NonlinearityKind::Forcing: return 0.0;
        default: return coef * p_ * std::pow(std::abs(t), p_ - 1.0);
    }
}

int NonlinearitySpec::padded_points(int n) const {
    if (kind_ == NonlinearityKind::Zero || kind_ == NonlinearityKind::Forcing) return n;
    const double factor = is_integer(p_) ? (std::ceil(p_ - 1e-12) + 1.0) / 2.0 : 1.5;
    int m = static_cast<int>(std::ceil(factor * n - 1e-9));
    if (m % 2 != 0) ++m;
    return std::max(m, n);
}

void NonlinearitySpec::check_grid(const TorusGrid& grid) const {
    if (coefficient_ && !(coefficient_->grid() == grid))
        throw ParameterError("nonlinearity coefficient lives on a different grid than u");
}

std::vector<double> NonlinearitySpec::coefficient_on(int points) const {
    if (!coefficient_) return {};
    if (points == coefficient_->grid().points()) {
        const auto v = coefficient_->values();
        return {v.begin(), v.end()};
    }
    const Field fine = inverse_transform(resample(forward_transform(*coefficient_), points));
    const auto v = fine.values();
    return {v.begin(), v.end()};
}

bool HypothesisReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<double> default_t_samples(double r0) {
    std::vector<double> out;
    for (int j = 8; j >= 1; --j) out.push_back(std::pow(10.0, -j) * r0);
    for (int i = 1; i <= 200; ++i) out.push_back(10.0 * r0 * i / 200.0);
    for (double t : {20.0, 50.0, 100.0}) out.push_back(t * r0);
    const std::size_t positive = out.size();
    for (std::size_t i = 0; i < positive; ++i) out.push_back(-out[i]);
    out.push_back(0.0);
    std::sort(out.begin(), out.end());
    return out;
}

HypothesisReport assess_hypotheses(const NonlinearitySpec& spec, const std::vector<double>& t_samples,
                                   const std::vector<std::size_t>& x_samples) {
    if (x_samples.empty() || t_samples.empty()) throw ParameterError("hypothesis check needs samples");
    HypothesisReport report;
    const double p = spec.p();
    const double mu = spec.mu();

    // (f1) holds by construction: the coefficient is a periodic grid field.
    report.checks.push_back({"f1", true, "", 0.0});

    {
        HypothesisCheck c{"f2", true, "", 0.0};
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                const double h = 1e-7 * std::max(1.0, std::abs(t));
                const double jump = std::abs(spec.f(x, t + h) - spec.f(x, t));
                c.value = std::max(c.value, jump);
                if (jump > 1e-4 * (1.0 + std::abs(spec.f(x, t))) && c.passed) {
                    c.passed = false;
                    c.witness = sample_witness(x, t);
                }
            }
        }
        report.checks.push_back(c);
    }

    {
        // max_x |f(x,t)/t| along t = +-10^{-j}: must decay toward 0.
        HypothesisCheck c{"f3", true, "", 0.0};
        std::vector<double> ratios;
        for (int j = 1; j <= 8; ++j) {
            const double t = std::pow(10.0, -j) * spec.r0();
            double r = 0.0;
            for (std::size_t x : x_samples)
                r = std::max({r, std::abs(spec.f(x, t) / t), std::abs(spec.f(x, -t) / t)});
            ratios.push_back(r);
        }
        for (std::size_t j = 1; j < ratios.size(); ++j) {
            if (ratios[j] > ratios[j - 1] * (1.0 + 1e-12) && c.passed) {
                c.passed = false;
                c.witness = "ratio |f/t| grows toward t = 0 at t = 1e-" + std::to_string(j + 1);
            }
        }
        if (ratios.back() > 0.5 * ratios.front() && ratios.back() > 0.0 && c.passed) {
            c.passed = false;
            c.witness = "ratio |f/t| does not decay toward t = 0";
        }
        c.value = ratios.back();
        report.checks.push_back(c);
    }

    {
        HypothesisCheck c{"f4", true, "", 0.0};
        for (std::size_t x : x_samples)
            for (double t : t_samples)
                c.value = std::max(c.value, std::abs(spec.f(x, t)) / (1.0 + std::pow(std::abs(t), p)));
        c.passed = std::isfinite(c.value) && p > 1.0;
        if (!c.passed) c.witness = "no finite growth constant with p > 1";
        report.growth_constant = c.value;
        report.checks.push_back(c);
    }

    {
        // 0 < mu F <= t f for |t| >= r0; value = max relative slack.
        HypothesisCheck c{"f5", true, "", 0.0};
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                if (std::abs(t) < spec.r0()) continue;
                const double lhs = mu * spec.F(x, t);
                const double rhs = t * spec.f(x, t);
                const bool ok = lhs > 0.0 && lhs <= rhs + 1e-12 * std::abs(rhs);
                if (rhs != 0.0) c.value = std::max(c.value, std::abs(rhs - lhs) / std::abs(rhs));
                if (!ok && c.passed) {
                    c.passed = false;
                    c.witness = sample_witness(x, t);
                }
            }
        }
        report.checks.push_back(c);
    }

    {
        HypothesisCheck c{"f6", true, "", 0.0};
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                const double tf = t * spec.f(x, t);
                c.value = std::min(c.value, tf);
                if (tf < 0.0 && c.passed) {
                    c.passed = false;
                    c.witness = sample_witness(x, t);
                }
            }
        }
        report.checks.push_back(c);
    }

    for (double eps : {1.0, 0.1}) {
        double c_eps = 0.0;
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                const double a = std::abs(t);
                if (a == 0.0) continue;
                c_eps = std::max(c_eps, (std::abs(spec.f(x, t)) - 2.0 * eps * a) / ((p + 1.0) * std::pow(a, p)));
                c_eps = std::max(c_eps, (std::abs(spec.F(x, t)) - eps * a * a) / std::pow(a, p + 1.0));
            }
        }
        c_eps = std::max(c_eps, std::numeric_limits<double>::min());
        std::ostringstream name;
        name << "growth(eps=" << eps << ")";
        HypothesisCheck c{name.str(), std::isfinite(c_eps), "", c_eps};
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                const double a = std::abs(t);
                const double fb = 2.0 * eps * a + (p + 1.0) * c_eps * std::pow(a, p);
                const double Fb = eps * a * a + c_eps * std::pow(a, p + 1.0);
                const bool ok = std::abs(spec.f(x, t)) <= fb * (1.0 + 1e-12) &&
                                std::abs(spec.F(x, t)) <= Fb * (1.0 + 1e-12);
                if (!ok && c.passed) {
                    c.passed = false;
                    c.witness = sample_witness(x, t);
                }
            }
        }
        report.c_eps.emplace_back(eps, c_eps);
        report.checks.push_back(c);
    }

    {
        // F >= a3 |t|^mu - a4 with a3 = a_min/(p+1); a4 = 0 when mu = p + 1
        // since then the bound is the primitive itself.
        const double a3 = spec.kind() == NonlinearityKind::Forcing ? 0.0 : spec.a_min() / (p + 1.0);
        const double a4 = std::abs(mu - (p + 1.0)) < 1e-12 ? 0.0 : std::max(a3, 0.0);
        report.a3 = a3;
        report.a4 = a4;
        HypothesisCheck c{"lower_bound", a3 > 0.0, a3 > 0.0 ? "" : "a3 is not positive", a3};
        for (std::size_t x : x_samples) {
            for (double t : t_samples) {
                const double bound = a3 * std::pow(std::abs(t), mu) - a4;
                if (spec.F(x, t) < bound - 1e-12 * std::abs(bound) && c.passed) {
                    c.passed = false;
                    c.witness = sample_witness(x, t);
                }
            }
        }
        report.checks.push_back(c);
    }
    return report;
}

HypothesisReport verify_hypotheses(const NonlinearitySpec& spec, const std::vector<double>& t_samples,
                                   const std::vector<std::size_t>& x_samples) {
    HypothesisReport report = assess_hypotheses(spec, t_samples, x_samples);
    // A sign violation also breaks the positivity half of (f5); report the
    // more basic condition.
    if (const HypothesisCheck* sign = report.find("f6"); sign && !sign->passed)
        throw HypothesisViolated(sign->name, sign->witness);
    for (const auto& c : report.checks)
        if (!c.passed) throw HypothesisViolated(c.name, c.witness);
    return report;
}

double nonlinear_energy(const NonlinearitySpec& spec, const Field& u) {
    spec.check_grid(u.grid());
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) sum += spec.F(j, u[j]);
    return sum * u.grid().cell_volume();
}

Field evaluate_padded(const NonlinearitySpec& spec, const Spectrum& u, int points, bool derivative) {
    spec.check_grid(u.grid());
    const Field fine = inverse_transform(resample(drop_nyquist(u), points));
    const std::vector<double> a = spec.coefficient_on(points);
    std::vector<double> out(fine.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double coef = a.empty() ? 1.0 : a[j];
        out[j] = derivative ? spec.df_with(coef, fine[j]) : spec.f_with(coef, fine[j]);
    }
    return Field(fine.grid(), std::move(out));
}

double nonlinear_energy_padded(const NonlinearitySpec& spec, const Spectrum& u) {
    spec.check_grid(u.grid());
    const int points = spec.padded_points(u.grid().points());
    const Field fine = inverse_transform(resample(drop_nyquist(u), points));
    const std::vector<double> a = spec.coefficient_on(points);
    double sum = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j) sum += spec.F_with(a.empty() ? 1.0 : a[j], fine[j]);
    return sum * fine.grid().cell_volume();
}

Spectrum nonlinear_gradient(const NonlinearitySpec& spec, const Spectrum& u) {
    const int n = u.grid().points();
    const Field values = evaluate_padded(spec, u, spec.padded_points(n), false);
    return drop_nyquist(resample(forward_transform(values), n));
}

Field nonlinear_derivative_padded(const NonlinearitySpec& spec, const Spectrum& u) {
    return evaluate_padded(spec, u, spec.padded_points(u.grid().points()), true);
}

Spectrum multiply_padded(const Field& d, const Spectrum& w) {
    const int n = w.grid().points();
    const Field fine = inverse_transform(resample(drop_nyquist(w), d.grid().points()));
    std::vector<double> out(fine.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = d[j] * fine[j];
    return drop_nyquist(resample(forward_transform(Field(fine.grid(), std::move(out))), n));
}

Spectrum nonlinear_jacobian_apply(const NonlinearitySpec& spec, const Spectrum& u, const Spectrum& w) {
    return multiply_padded(nonlinear_derivative_padded(spec, u), w);
}

}  // namespace pfrac
