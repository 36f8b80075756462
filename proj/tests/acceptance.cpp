// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "pfrac/bessel.hpp"
#include "pfrac/continuation.hpp"
#include "pfrac/energy.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/extension.hpp"
#include "pfrac/io.hpp"
#include "pfrac/linking.hpp"
#include "pfrac/nonlinearity.hpp"
#include "pfrac/theta.hpp"

#include "oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace pfrac;

namespace {

const double kPi = std::numbers::pi;

struct Verdict {
    bool passed = true;
    std::ostringstream detail{};

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << " [" << what << "]";
        }
    }
};

Spectrum random_spectrum(const TorusGrid& grid, std::mt19937_64& rng, int kmax, bool mean) {
    std::normal_distribution<double> normal;
    Spectrum out = Spectrum::zeros(grid);
    const int top = std::min(kmax, grid.points() / 2 - 1);
    for (int k = mean ? 0 : 1; k <= top; ++k) {
        const double d = 1.0 / (1.0 + k * k);
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

struct StandardProblem {
    TorusGrid grid{1, 2.0 * kPi, 64};
    FracParams params{0.5, 1.0};
    NonlinearitySpec spec = NonlinearitySpec::pure_power(3.0, 1, params, 4.0);
};

void multiplier_exactness(Verdict& v) {
    const TorusGrid grid(1, 2.0 * kPi, 32);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(-15, 15);
    const std::array<double, 3> orders{0.25, 0.5, 0.75};
    const std::array<double, 3> masses{0.0, 0.5, 1.0};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const FracParams p(orders[trial % 3], masses[(trial / 3) % 3]);
        int k = pick(rng);
        if (k == 0 && p.m() == 0.0) k = 1;
        const std::size_t i = grid.index_of({k, 0, 0});
        const Spectrum u = Spectrum::mode(grid, {k, 0, 0}, Complex(1.0, k == 0 ? 0.0 : 0.5));
        const Spectrum w = apply_bessel_operator(u, p);
        const double expected = std::pow(double(k * k) + p.m() * p.m(), p.s());
        worst = std::max(worst, std::abs(w[i] - expected * u[i]) / std::abs(expected * u[i]));
        for (std::size_t j = 0; j < w.size(); ++j)
            if (j != i && j != grid.index_of({-k, 0, 0})) v.require(w[j] == 0.0, "leak into other modes");
    }
    v.detail << " max rel err " << worst;
    v.require(worst < 1e-12, "relative error >= 1e-12");
}

void kappa_agreement(Verdict& v) {
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
    const double half = std::abs(kappa(0.5) - 1.0);
    v.detail << " worst pairwise " << worst << ", |kappa(1/2) - 1| " << half;
    v.require(worst < 1e-5, "pairwise disagreement");
    v.require(half < 1e-12, "kappa(1/2) != 1");
}

void closed_form_half(Verdict& v) {
    const ThetaProfile th(0.5);
    double theta_err = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double y = 1e-3 * std::pow(3e4, i / 400.0);
        theta_err = std::max(theta_err, std::abs(th.theta(y) - std::exp(-y)));
    }
    const TorusGrid grid(1, 2.0 * kPi, 32);
    const FracParams p(0.5, 0.0);
    const Spectrum u = cos_mode(grid);
    const ExtensionField ext = extend(u, p);
    const double energy_err = std::abs(cylinder_energy(ext) - kPi);
    const std::vector<double> ys{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const Field d = inverse_transform(conormal_derivative(ext, ys));
    const Field c = inverse_transform(u);
    double conormal_err = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) conormal_err = std::max(conormal_err, std::abs(d[j] - c[j]));
    v.detail << " theta err " << theta_err << ", energy err " << energy_err << ", conormal err " << conormal_err;
    v.require(theta_err < 1e-10, "theta != e^{-y}");
    v.require(energy_err < 1e-8, "energy != pi");
    v.require(conormal_err < 1e-6, "conormal derivative != cos x");
}

// theta(t) (1 + eps t e^{-t}), t = lambda y: a perturbation of the optimal decay.
ProfileFamily perturbed_theta(std::shared_ptr<const ThetaProfile> th, double eps) {
    ProfileFamily f;
    f.value = [th, eps](double lambda, double y) {
        const double t = lambda * y;
        return th->theta(t) * (1.0 + eps * t * std::exp(-t));
    };
    f.slope = [th, eps](double lambda, double y) {
        const double t = lambda * y;
        const double bump = eps * t * std::exp(-t);
        return lambda * (th->theta_prime(t) * (1.0 + bump) + th->theta(t) * eps * (1.0 - t) * std::exp(-t));
    };
    return f;
}

void sharp_trace(Verdict& v) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> factor(0.3, 3.0);
    std::uniform_real_distribution<double> bump(0.05, 0.5);
    const TorusGrid grid(1, 2.0 * kPi, 16);
    const std::array<double, 3> orders{0.25, 0.5, 0.75};
    double worst_gap = std::numeric_limits<double>::infinity();
    double worst_equality = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const FracParams p(orders[trial % 3], trial % 2 == 0 ? 0.5 : 0.0);
        const Spectrum u = random_spectrum(grid, rng, 6, p.m() > 0.0);
        const ProfileFamily family = trial % 4 < 2 ? exponential_family(factor(rng))
                                                   : perturbed_theta(std::make_shared<const ThetaProfile>(p.s()),
                                                                     (trial % 8 < 4 ? 1.0 : -1.0) * bump(rng));
        worst_gap = std::min(worst_gap, sharp_trace_gap(sample_separable(u, p, family, 200), p));
        const CylinderFunction exact = sample_extension(extend(u, p), 200);
        worst_equality = std::max(worst_equality, std::abs(sharp_trace_gap(exact, p)) / cylinder_energy(exact, p));
    }
    double flat = 0.0;
    double probe = std::numeric_limits<double>::infinity();
    for (double s : orders) {
        const FracParams p(s, 0.7);
        const CylinderFunction c = sample_extension(extend(Spectrum::mode(grid, {0, 0, 0}, 3.0), p), 200);
        flat = std::max(flat, std::abs(ground_gap(c, p)) / cylinder_energy(c, p));
        for (int trial = 0; trial < 5; ++trial) {
            const CylinderFunction z = sample_extension(extend(random_spectrum(grid, rng, 6, false), p), 200);
            probe = std::min(probe, ground_gap(z, p));
        }
    }
    v.detail << " min gap " << worst_gap << ", equality rel " << worst_equality << ", ground gap on theta(my) "
             << flat << ", min ground gap on zero-mean " << probe;
    v.require(worst_gap >= -1e-8, "trace inequality violated");
    v.require(worst_equality < 1e-6, "equality case");
    v.require(flat < 1e-6, "ground gap on theta(my) nonzero");
    v.require(probe > 1e-4, "ground gap on zero-mean probe not positive");
}

void theta_ode(Verdict& v) {
    double worst = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        const ThetaProfile th(s);
        for (int i = 0; i < 100; ++i) {
            const double y = 1e-3 * std::pow(3e4, i / 99.0);
            worst = std::max(worst, th.ode_residual(y) / std::max(1.0, th.theta(y)));
        }
    }
    v.detail << " max scaled residual " << worst;
    v.require(worst < 1e-8, "ODE residual");
}

void gradient_consistency(Verdict& v) {
    struct Case {
        TorusGrid grid;
        FracParams params;
        std::function<NonlinearitySpec(const TorusGrid&, const FracParams&)> spec;
    };
    const std::vector<Case> cases{
        {TorusGrid(1, 2.0 * kPi, 64), FracParams(0.5, 1.0),
         [](const TorusGrid&, const FracParams& p) { return NonlinearitySpec::pure_power(3.0, 1, p, 4.0); }},
        {TorusGrid(1, 5.0, 32), FracParams(0.25, 0.0),
         [](const TorusGrid& g, const FracParams& p) {
             const double w = g.omega();
             return NonlinearitySpec::modulated_power(
                 Field::from_function(g, [w](const Point& x) { return 1.5 + std::sin(w * x[0]); }), 2.5, p, 3.0);
         }},
        {TorusGrid(2, 2.0 * kPi, 16), FracParams(0.75, 0.5),
         [](const TorusGrid&, const FracParams& p) { return NonlinearitySpec::pure_power(2.0, 2, p, 3.0); }},
    };
    std::mt19937_64 rng(6);
    double worst = 0.0;
    int pairs = 0;
    for (const auto& c : cases) {
        const NonlinearitySpec spec = c.spec(c.grid, c.params);
        const auto mult = bessel_multipliers(c.grid, c.params);
        for (Metric metric : {Metric::L2, Metric::X}) {
            for (int trial = 0; trial < 20; ++trial) {
                const Spectrum u = random_spectrum(c.grid, rng, 6, true);
                const Spectrum w = random_spectrum(c.grid, rng, 6, true);
                const double eps = 1e-5;
                const double fd = (evaluate(u + eps * w, c.params, spec).value -
                                   evaluate(u - eps * w, c.params, spec).value) /
                                  (2.0 * eps);
                const Spectrum g = gradient(u, c.params, spec, metric);
                double d = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    const double weight = metric == Metric::L2 ? 1.0 : (mult[i] == 0.0 ? 1.0 : mult[i]);
                    d += weight * (std::conj(g[i]) * w[i]).real();
                }
                worst = std::max(worst, std::abs(fd - d) / std::max(std::abs(d), 1e-12));
                ++pairs;
            }
        }
    }
    v.detail << " " << pairs << " pairs, max rel err " << worst;
    v.require(worst < 1e-6, "directional derivative mismatch");
}

void linking_solve(Verdict& v) {
    const StandardProblem st;
    const SolverState state = minimax_search(st.grid, st.params, st.spec, LinkingConfig{});
    v.require(state.status == SolverStatus::Converged, "status " + to_string(state.status));
    const double residual = residual_norm(state.iterate, st.params, st.spec);
    const double norm = hs_norm(state.iterate, st.params);
    const double level = evaluate(state.iterate, st.params, st.spec).value;
    bool monotone = true;
    for (std::size_t i = 1; i < state.history.size(); ++i)
        monotone = monotone && state.history[i].level <= state.history[i - 1].level;
    const RefineResult refined = newton_refine(state.iterate, st.params, st.spec, 1e-11);
    const double shift = hs_norm(refined.solution - state.iterate, st.params);
    v.detail << " level " << io::format_double(level) << " in [" << state.rho << ", " << state.delta_hat
             << "], residual " << residual << ", hs_norm " << norm << ", refine shift " << shift;
    v.require(residual < 1e-8, "residual");
    v.require(norm > 1e-3, "trivial");
    v.require(level > 0.0, "level not positive");
    v.require(level >= state.rho && level <= state.delta_hat, "level outside [rho, delta]");
    v.require(monotone, "history increases");
    v.require(shift < 1e-6, "refinement moved the solution");
}

void oracle_equivalence(Verdict& v) {
    const testing::DenseModel model;
    const testing::OracleSolution best = testing::multistart_catalog(model, 200, 2024);
    v.require(best.found, "catalog empty");
    if (!best.found) return;
    const SolverState state = minimax_search(model.grid, model.params, model.spec, LinkingConfig{});
    v.require(state.status == SolverStatus::Converged, "status " + to_string(state.status));
    const double distance = testing::distance_mod_symmetry(model, model.to_spectrum(best.coefficients), state.iterate);
    v.detail << " oracle level " << io::format_double(best.level) << ", linking level "
             << io::format_double(state.level) << ", H^s distance " << distance;
    v.require(distance < 1e-6, "distance");
}

void continuation(Verdict& v) {
    const StandardProblem st;
    const NonlinearitySpec spec = NonlinearitySpec::pure_power(3.0, 1, FracParams(0.5, 0.5), 4.0);
    const SobolevEstimate est =
        estimate_sobolev_constant(st.grid, FracParams(0.5, 0.5), sobolev_exponent(1, FracParams(0.5, 0.5), spec), 0);
    const std::vector<double> masses{0.5, 0.1, 0.02, 0.004};
    v.require(masses.front() < est.m0, "masses not below m0");
    const SweepResult sweep = sweep_m(st.grid, masses, 0.5, spec, LinkingConfig{}, est.m0);
    for (const auto& r : sweep.records) v.require(r.converged(), "m = " + io::format_double(r.m) + " " + r.status);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& r : sweep.records) {
        lo = std::min(lo, r.alpha);
        hi = std::max(hi, r.alpha);
    }
    const LimitResult limit = extract_limit(sweep, spec, 1e-8);
    v.detail << " m0 " << est.m0 << ", alpha in [" << lo << ", " << hi << "] within [" << sweep.lambda_hat << ", "
             << sweep.delta_hat << "], limit residual " << limit.residual << ", int f(u)u " << limit.nontriviality;
    v.require(lo > 0.0 && sweep.envelope_holds, "envelope");
    v.require(hi / lo < 10.0, "alpha ratio");
    v.require(limit.residual < 1e-8, "limit residual");
    v.require(limit.hs_norm > 1e-3, "limit trivial");
    v.require(limit.nontriviality > 0.0, "int f(u)u <= 0");
}

void hypotheses(Verdict& v) {
    const TorusGrid grid(1, 2.0 * kPi, 32);
    const FracParams p(0.5, 1.0);
    const double w = grid.omega();
    const std::vector<NonlinearitySpec> shipped{
        NonlinearitySpec::pure_power(3.0, 1, p, 4.0),
        NonlinearitySpec::pure_power(2.0, 1, p, 3.0),
        NonlinearitySpec::modulated_power(
            Field::from_function(grid, [w](const Point& x) { return 2.0 + std::cos(w * x[0]); }), 3.0, p, 4.0),
    };
    for (const auto& spec : shipped) {
        const HypothesisReport r = assess_hypotheses(spec, default_t_samples(spec.r0()), all_points(grid));
        const HypothesisCheck* f5 = r.find("f5");
        v.require(r.all_passed(), "hypothesis check failed");
        v.require(f5 && f5->value < 1e-12, "f5 not an equality");
        for (const char* name : {"growth(eps=1)", "growth(eps=0.1)"}) {
            const HypothesisCheck* c = r.find(name);
            v.require(c && c->passed, name);
        }
        v.require(r.c_eps.size() == 2, "C_eps not reported");
        if (r.c_eps.size() == 2)
            v.detail << " C_1 = " << r.c_eps[0].second << ", C_0.1 = " << r.c_eps[1].second << ";";
    }
    const auto bad = NonlinearitySpec::modulated_power(
        Field::from_function(grid, [w](const Point& x) { return std::cos(w * x[0]); }), 3.0, p);
    try {
        verify_hypotheses(bad, default_t_samples(1.0), all_points(grid));
        v.require(false, "sign-changing a accepted");
    } catch (const HypothesisViolated& e) {
        v.require(e.hypothesis() == "f6", "rejected at " + e.hypothesis());
        v.detail << " negative control rejected at " << e.hypothesis();
    }
}

void determinism(Verdict& v) {
    const StandardProblem st;
    LinkingConfig cfg;
    cfg.seed = 11;
    const std::string a = io::trace_csv(minimax_search(st.grid, st.params, st.spec, cfg).history);
    const std::string b = io::trace_csv(minimax_search(st.grid, st.params, st.spec, cfg).history);
    v.detail << " trace " << a.size() << " bytes";
    v.require(!a.empty() && a == b, "traces differ");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"multiplier exactness", multiplier_exactness},
        {"kappa triple agreement", kappa_agreement},
        {"closed-form s = 1/2 suite", closed_form_half},
        {"sharp trace inequality", sharp_trace},
        {"theta ODE residual", theta_ode},
        {"energy/gradient consistency", gradient_consistency},
        {"discrete linking solve", linking_solve},
        {"small-instance oracle equivalence", oracle_equivalence},
        {"m -> 0 continuation", continuation},
        {"AR/growth hypothesis verification", hypotheses},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.passed = false;
            v.detail << " threw: " << e.what();
        }
        if (!v.passed) ++failed;
        std::printf("%s  %2zu  %s:%s\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.str().c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
