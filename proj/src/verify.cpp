#include "pfrac/verify.hpp"

#include "pfrac/bessel.hpp"
#include "pfrac/energy.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/extension.hpp"
#include "pfrac/nonlinearity.hpp"
#include "pfrac/theta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

namespace pfrac {
namespace {

using std::numbers::pi;

struct Outcome {
    bool passed;
    double value;
    std::string detail{};
};

Spectrum random_spectrum(const TorusGrid& grid, std::mt19937_64& rng, int kmax, double amp, bool mean) {
    std::normal_distribution<double> normal;
    Spectrum out = Spectrum::zeros(grid);
    const int top = std::min(kmax, grid.points() / 2 - 1);
    for (int k = mean ? 0 : 1; k <= top; ++k) {
        const double d = amp / (1.0 + k * k);
        out += Spectrum::mode(grid, {k, 0, 0}, Complex(normal(rng) * d, k == 0 ? 0.0 : normal(rng) * d));
    }
    return out;
}

Spectrum cos_mode(const TorusGrid& grid) {
    return forward_transform(Field::from_function(grid, [](const Point& x) { return std::cos(x[0]); }));
}

std::vector<std::size_t> all_points(const TorusGrid& grid) {
    std::vector<std::size_t> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

Outcome below(double value, double tol) { return {value < tol, value}; }

}  // namespace

std::vector<PropertyResult> run_property_suite(const RunConfig& cfg) {
    const TorusGrid line(1, 2.0 * pi, 32);
    const TorusGrid& grid = cfg.grid;
    const FracParams& params = cfg.params;
    const NonlinearitySpec& spec = cfg.spec;
    std::mt19937_64 rng(cfg.seed);

    std::vector<std::pair<std::pair<std::string, std::string>, std::function<Outcome()>>> checks;
    auto add = [&](std::string module, std::string name, std::function<Outcome()> fn) {
        checks.push_back({{std::move(module), std::move(name)}, std::move(fn)});
    };

    // spectral core
    add("spectral_core", "multiplier_exactness", [&] {
        std::uniform_int_distribution<int> pick(-15, 15);
        double worst = 0.0;
        const std::array<double, 3> orders{0.25, 0.5, 0.75};
        const std::array<double, 3> masses{0.0, 0.5, 1.0};
        for (int trial = 0; trial < 50; ++trial) {
            const FracParams p(orders[trial % 3], masses[(trial / 3) % 3]);
            int k = pick(rng);
            if (k == 0 && p.m() == 0.0) k = 1;
            const Spectrum u = Spectrum::mode(line, {k, 0, 0}, Complex(1.0, k == 0 ? 0.0 : 0.5));
            const Spectrum v = apply_bessel_operator(u, p);
            const double expected = std::pow(double(k * k) + p.m() * p.m(), p.s());
            const std::size_t i = line.index_of({k, 0, 0});
            worst = std::max(worst, std::abs(v[i] - expected * u[i]) / std::abs(expected * u[i]));
        }
        return below(worst, 1e-12);
    });
    add("spectral_core", "transform_round_trip", [&] {
        const Field f = inverse_transform(random_spectrum(grid, rng, 10, 1.0, true));
        const Field g = inverse_transform(forward_transform(f));
        double worst = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, std::abs(f[j] - g[j]));
        return below(worst, 1e-12);
    });
    add("spectral_core", "parseval", [&] {
        const Spectrum u = random_spectrum(grid, rng, 10, 1.0, true);
        const double l2 = lq_norm(inverse_transform(u), 2.0);
        return below(std::abs(l2 - l2_norm(u)) / l2_norm(u), 1e-12);
    });
    add("spectral_core", "hermitian_symmetry", [&] {
        const Field f = inverse_transform(random_spectrum(grid, rng, 10, 1.0, true));
        return below(hermitian_defect(forward_transform(f)), 1e-13);
    });
    add("spectral_core", "resolvent_inverse", [&] {
        const FracParams p(params.s(), std::max(params.m(), 0.5));
        const Spectrum r = random_spectrum(grid, rng, 10, 1.0, true);
        const Spectrum back = apply_bessel_operator(solve_linear(r, p, false), p);
        return below(l2_norm(back - r) / l2_norm(r), 1e-12);
    });
    add("spectral_core", "hs_norm_monotone_in_s", [&] {
        const Spectrum u = random_spectrum(line, rng, 10, 1.0, false);
        double prev = 0.0;
        bool ok = true;
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double h = hs_norm(u, FracParams(s, 1.0));
            ok = ok && h >= prev;
            prev = h;
        }
        return Outcome{ok, prev};
    });

    // theta profile and Bessel functions
    add("bessel_theta", "kappa_half_is_one", [&] { return below(std::abs(kappa(0.5) - 1.0), 1e-12); });
    add("bessel_theta", "kappa_triple_agreement", [&] {
        const std::vector<double> ladder{0.08, 0.04, 0.02, 0.01, 0.005};
        double worst = 0.0;
        for (double s : {0.25, 0.5, 0.75}) {
            const ThetaProfile th(s);
            const double k = kappa(s);
            const double integral = th.energy_integral();
            const double limit = conormal_limit_check(th, ladder);
            worst = std::max({worst, std::abs(integral / k - 1.0), std::abs(limit / k - 1.0),
                              std::abs(limit / integral - 1.0)});
        }
        return below(worst, 1e-5);
    });
    add("bessel_theta", "theta_closed_form_half", [&] {
        const ThetaProfile th(0.5);
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double y = 1e-3 * std::pow(3e4, i / 200.0);
            worst = std::max(worst, std::abs(th.theta(y) - std::exp(-y)));
        }
        return below(worst, 1e-10);
    });
    add("bessel_theta", "theta_ode_residual", [&] {
        double worst = 0.0;
        for (double s : {0.25, 0.5, 0.75}) {
            const ThetaProfile th(s);
            for (int i = 0; i < 100; ++i) {
                const double y = 1e-3 * std::pow(3e4, i / 99.0);
                worst = std::max(worst, std::abs(th.ode_residual(y)) / std::max(1.0, th.theta(y)));
            }
        }
        return below(worst, 1e-8);
    });
    add("bessel_theta", "bessel_k_half_order", [&] {
        double worst = 0.0;
        for (double x : {1e-3, 0.1, 1.0, 2.0, 2.5, 10.0, 40.0}) {
            const double exact = std::sqrt(pi / (2.0 * x)) * std::exp(-x);
            const BesselKPair k = bessel_k(0.5, x);
            worst = std::max({worst, std::abs(k.k_nu / exact - 1.0), std::abs(k.k_next / (exact * (1.0 + 1.0 / x)) - 1.0)});
        }
        return below(worst, 1e-12);
    });

    // extension
    add("extension", "extension_energy_cos", [&] {
        const ExtensionField v = extend(cos_mode(line), FracParams(0.5, 0.0));
        return below(std::abs(cylinder_energy(v) - pi), 1e-8);
    });
    add("extension", "conormal_derivative_cos", [&] {
        const Spectrum u = cos_mode(line);
        const ExtensionField v = extend(u, FracParams(0.5, 0.0));
        const std::vector<double> ys{1e-2, 5e-3, 2.5e-3, 1.25e-3};
        const Field d = inverse_transform(conormal_derivative(v, ys));
        const Field c = inverse_transform(u);
        double worst = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, std::abs(d[j] - c[j]));
        return below(worst, 1e-6);
    });
    add("extension", "sharp_trace_inequality", [&] {
        std::uniform_real_distribution<double> factor(0.3, 3.0);
        const TorusGrid g(1, 2.0 * pi, 16);
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 100; ++trial) {
            const FracParams p(0.2 + 0.6 * (trial % 4) / 3.0, trial % 2 == 0 ? 0.5 : 0.0);
            const Spectrum u = random_spectrum(g, rng, 5, 1.0, p.m() > 0.0);
            worst = std::min(worst, sharp_trace_gap(sample_separable(u, p, exponential_family(factor(rng)), 200), p));
        }
        return Outcome{worst >= -1e-8, worst};
    });
    add("extension", "trace_equality_for_extensions", [&] {
        const TorusGrid g(1, 2.0 * pi, 16);
        double worst = 0.0;
        for (double s : {0.25, 0.5, 0.75}) {
            const FracParams p(s, 0.5);
            const CylinderFunction v = sample_extension(extend(random_spectrum(g, rng, 5, 1.0, true), p), 200);
            worst = std::max(worst, std::abs(sharp_trace_gap(v, p)) / cylinder_energy(v, p));
        }
        return below(worst, 1e-6);
    });
    add("extension", "ground_gap", [&] {
        const TorusGrid g(1, 2.0 * pi, 16);
        const FracParams p(0.5, 0.7);
        const CylinderFunction c = sample_extension(extend(Spectrum::mode(g, {0, 0, 0}, 3.0), p), 200);
        const CylinderFunction z = sample_extension(extend(cos_mode(g), p), 200);
        const double flat = std::abs(ground_gap(c, p)) / cylinder_energy(c, p);
        const double gap = ground_gap(z, p);
        return Outcome{flat < 1e-6 && gap > 1e-4, gap};
    });
    add("extension", "interior_equation", [&] {
        const FracParams p(0.3, 0.5);
        const ExtensionField v = extend(random_spectrum(line, rng, 6, 1.0, true), p);
        const Field r = interior_residual(v, 0.7);
        double worst = 0.0;
        for (double x : r.values()) worst = std::max(worst, std::abs(x));
        return below(worst / cylinder_energy(v), 1e-7);
    });

    // nonlinearity
    const bool power = spec.kind() == NonlinearityKind::PurePower || spec.kind() == NonlinearityKind::ModulatedPower;
    add("nonlinearity", "hypotheses_f1_to_f6", [&] {
        if (!power) return Outcome{true, 0.0, "not a power family; skipped"};
        const HypothesisReport r = assess_hypotheses(spec, default_t_samples(spec.r0()), all_points(grid));
        std::string failed;
        for (const auto& c : r.checks)
            if (!c.passed) failed += c.name + " ";
        return Outcome{r.all_passed(), r.growth_constant, failed};
    });
    add("nonlinearity", "ambrosetti_rabinowitz_equality", [&] {
        if (!power) return Outcome{true, 0.0, "not a power family; skipped"};
        const auto pure = NonlinearitySpec::pure_power(spec.p(), grid.dim(), params);
        const HypothesisReport r = assess_hypotheses(pure, default_t_samples(1.0), {0});
        return below(r.find("f5")->value, 1e-12);
    });
    add("nonlinearity", "growth_bounds", [&] {
        if (!power) return Outcome{true, 0.0, "not a power family; skipped"};
        const HypothesisReport r = assess_hypotheses(spec, default_t_samples(spec.r0()), all_points(grid));
        const bool ok = r.find("growth(eps=1)")->passed && r.find("growth(eps=0.1)")->passed;
        return Outcome{ok, r.c_eps.empty() ? 0.0 : r.c_eps.back().second};
    });
    add("nonlinearity", "sign_changing_coefficient_rejected", [&] {
        const Field a = Field::from_function(line, [](const Point& x) { return std::cos(x[0]); });
        const auto bad = NonlinearitySpec::modulated_power(a, 3.0, FracParams(0.5, 1.0));
        try {
            verify_hypotheses(bad, default_t_samples(1.0), all_points(line));
        } catch (const HypothesisViolated& e) {
            const std::string msg = e.what();
            return Outcome{msg.find("f6") != std::string::npos, 0.0, msg};
        }
        return Outcome{false, 0.0, "accepted"};
    });
    add("nonlinearity", "dealiased_cube", [&] {
        // cos^3 x = (3 cos x + cos 3x) / 4 exactly
        const auto cube = NonlinearitySpec::pure_power(3.0, 1, FracParams(0.5, 1.0));
        const TorusGrid g(1, 2.0 * pi, 8);
        const Spectrum got = nonlinear_gradient(cube, cos_mode(g));
        const Spectrum want = forward_transform(Field::from_function(
            g, [](const Point& x) { return 0.75 * std::cos(x[0]) + 0.25 * std::cos(3.0 * x[0]); }));
        return below(l2_norm(got - want), 1e-13);
    });

    // energy
    auto directional = [&](Metric metric) {
        double worst = 0.0;
        const auto mult = bessel_multipliers(grid, params);
        for (int trial = 0; trial < 20; ++trial) {
            const Spectrum u = random_spectrum(grid, rng, 10, 1.0, true);
            const Spectrum w = random_spectrum(grid, rng, 10, 1.0, true);
            const double eps = 1e-5;
            const double fd =
                (evaluate(u + eps * w, params, spec).value - evaluate(u - eps * w, params, spec).value) / (2.0 * eps);
            const Spectrum g = gradient(u, params, spec, metric);
            double d = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double weight = metric == Metric::L2 ? 1.0 : (mult[i] == 0.0 ? 1.0 : mult[i]);
                d += weight * (std::conj(g[i]) * w[i]).real();
            }
            worst = std::max(worst, std::abs(fd - d) / std::max(std::abs(d), 1e-12));
        }
        return below(worst, 1e-6);
    };
    add("energy", "gradient_consistency_l2", [&] { return directional(Metric::L2); });
    add("energy", "gradient_consistency_x", [&] { return directional(Metric::X); });
    add("energy", "quadratic_coercivity", [&] {
        if (params.m() == 0.0) return Outcome{true, 0.0, "m = 0; no coercivity gap"};
        const double c = coercivity_constant(grid, params);
        double worst = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 20; ++trial)
            worst = std::min(worst, quadratic_gap(random_spectrum(grid, rng, 10, 1.0, false), params) - c);
        return Outcome{c > 0.0 && worst >= -1e-12, c};
    });
    add("energy", "zero_is_critical", [&] {
        if (spec.kind() == NonlinearityKind::Forcing) return Outcome{true, 0.0, "forcing probe; skipped"};
        const Spectrum z = Spectrum::zeros(grid);
        const EnergyReport r = evaluate(z, params, spec);
        return below(std::abs(r.value) + l2_norm(gradient(z, params, spec)), 1e-15);
    });

    std::vector<PropertyResult> out;
    for (auto& [key, fn] : checks) {
        PropertyResult r{key.second, key.first};
        try {
            const Outcome o = fn();
            r.passed = o.passed;
            r.value = o.value;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace pfrac
