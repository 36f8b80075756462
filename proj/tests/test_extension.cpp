#include "doctest.h"

#include "pfrac/errors.hpp"
#include "pfrac/extension.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pfrac;
using std::numbers::pi;

namespace {

Spectrum cos_mode(const TorusGrid& grid) { return Spectrum::mode(grid, {1, 0, 0}, std::sqrt(pi / 2.0)); }

Spectrum random_spectrum(const TorusGrid& grid, std::mt19937_64& rng, int kmax, bool with_mean) {
    std::normal_distribution<double> normal;
    Spectrum out = Spectrum::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Wavevector k = grid.wavenumber(i);
        bool inside = true;
        for (int d = 0; d < grid.dim(); ++d) inside = inside && std::abs(k[d]) <= kmax;
        if (!inside || grid.conjugate_index(i) < i) continue;
        if (i == 0 && !with_mean) continue;
        const double decay = 1.0 / (1.0 + grid.wavenumber_sq(i));
        Complex v(normal(rng) * decay, i == 0 ? 0.0 : normal(rng) * decay);
        out += Spectrum::mode(grid, k, v);
    }
    return out;
}

double max_abs_diff(const Spectrum& a, const Spectrum& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
    return out;
}

}  // namespace

TEST_CASE("extension of cos x at s = 1/2 is cos x e^{-y}") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    const ExtensionField v = extend(cos_mode(grid), FracParams(0.5, 0.0));
    for (double y : {0.0, 0.3, 2.0})
        for (double x : {0.0, 0.7, 3.0}) CHECK(v.value({x, 0, 0}, y) == doctest::Approx(std::cos(x) * std::exp(-y)).epsilon(1e-13));
    CHECK(cylinder_energy(v) == doctest::Approx(pi).epsilon(1e-12));
    const std::vector<double> ys{1e-2, 1e-3, 1e-4};
    CHECK(max_abs_diff(conormal_derivative(v, ys), cos_mode(grid)) < 1e-9);
}

TEST_CASE("extension of a constant is a multiple of theta(m y)") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    const double m = 0.8;
    const double c = 1.7;
    const FracParams p(0.3, m);
    const ExtensionField v = extend(Spectrum::mode(grid, {0, 0, 0}, c * std::sqrt(2.0 * pi)), p);
    const ThetaProfile profile(0.3);
    for (double y : {0.1, 1.0, 4.0}) CHECK(v.value({1.0, 0, 0}, y) == doctest::Approx(c * profile.theta(m * y)).epsilon(1e-13));
    const std::vector<double> ys{0.08, 0.04, 0.02, 0.01, 0.005};
    const Spectrum d = conormal_derivative(v, ys);
    CHECK(std::abs(d[0] / (kappa(0.3) * std::pow(m, 0.6) * c * std::sqrt(2.0 * pi)) - 1.0) < 1e-5);
}

TEST_CASE("zero data and the m = 0 constant mode") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    const FracParams p(0.4, 0.0);
    const ExtensionField zero = extend(Spectrum::zeros(grid), p);
    CHECK(cylinder_energy(zero) == 0.0);
    const std::vector<double> ys{1e-2, 1e-3};
    CHECK(l2_norm(conormal_derivative(zero, ys)) == 0.0);
    const Spectrum with_mean = cos_mode(grid) + Spectrum::mode(grid, {0, 0, 0}, 1.0);
    CHECK_THROWS_AS(extend(with_mean, p), ZeroModeNoDecay);
    CHECK(sharp_trace_gap(sample_separable(Spectrum::zeros(grid), FracParams(0.4, 1.0), exponential_family(1.0), 50),
                          FracParams(0.4, 1.0)) == 0.0);
}

TEST_CASE("tensor quadrature energy of cos x e^{-y}") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    const FracParams p(0.5, 0.0);
    CHECK(cylinder_energy(cos_mode(grid), p, exponential_family(1.0)) == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("property: extension energy equals kappa times the H^s norm") {
    std::mt19937_64 rng(21);
    for (double s : {0.15, 0.25, 0.5, 0.75, 0.9}) {
        for (double m : {0.0, 0.6}) {
            const TorusGrid grid(2, 3.0, 8);
            const FracParams p(s, m);
            const Spectrum u = random_spectrum(grid, rng, 3, m > 0.0);
            const double h = hs_norm(u, p);
            const ExtensionField v = extend(u, p);
            CHECK(std::abs(cylinder_energy(v) / (kappa(s) * h * h) - 1.0) < 1e-6);
            const double tensor = cylinder_energy(u, p, theta_family(v.shared_profile()));
            CHECK(std::abs(tensor / (kappa(s) * h * h) - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("property: sharp trace inequality and its equality case") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> factor(0.3, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = 0.2 + 0.6 * (trial % 4) / 3.0;
        const FracParams p(s, trial % 2 == 0 ? 0.5 : 0.0);
        const TorusGrid grid(1, 2.0 * pi, 16);
        const Spectrum u = random_spectrum(grid, rng, 5, p.m() > 0.0);
        const double gap_wrong = sharp_trace_gap(sample_separable(u, p, exponential_family(factor(rng)), 200), p);
        CHECK(gap_wrong >= -1e-8);
        const ExtensionField v = extend(u, p);
        const CylinderFunction exact = sample_extension(v, 200);
        const double energy = cylinder_energy(exact, p);
        CHECK(std::abs(sharp_trace_gap(exact, p)) < 1e-6 * energy);
    }
}

TEST_CASE("wrong decay strictly increases the energy") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    const FracParams p(0.5, 0.0);
    const CylinderFunction v = sample_separable(cos_mode(grid), p, exponential_family(2.0), 120);
    // per mode: (4 + 1)/4 - 1 = 1/4 times |u|^2 = pi
    CHECK(sharp_trace_gap(v, p) == doctest::Approx(pi / 4.0).epsilon(1e-10));
}

TEST_CASE("ground gap") {
    const TorusGrid grid(1, 2.0 * pi, 16);
    for (double s : {0.25, 0.5, 0.75}) {
        const FracParams p(s, 0.7);
        const ExtensionField c = extend(Spectrum::mode(grid, {0, 0, 0}, 5.0 * std::sqrt(2.0 * pi)), p);
        const CylinderFunction vc = sample_extension(c, 200);
        CHECK(std::abs(ground_gap(vc, p)) < 1e-6 * cylinder_energy(vc, p));
        const CylinderFunction vz = sample_extension(extend(cos_mode(grid), p), 200);
        const double expected = kappa(s) * (std::pow(1.0 + 0.49, s) - std::pow(0.7, 2.0 * s)) * pi;
        CHECK(ground_gap(vz, p) == doctest::Approx(expected).epsilon(1e-6));
        CHECK(ground_gap(vz, p) > 1e-4);
    }
    const CylinderFunction v0 = sample_extension(extend(cos_mode(grid), FracParams(0.5, 0.0)), 20);
    CHECK_THROWS_AS(ground_gap(v0, FracParams(0.5, 0.0)), DomainError);
}

TEST_CASE("property: conormal identity mode by mode") {
    std::mt19937_64 rng(41);
    const std::vector<double> ys{0.08, 0.04, 0.02, 0.01, 0.005};
    for (double s : {0.25, 0.5, 0.75}) {
        const TorusGrid grid(1, 2.0 * pi, 16);
        const FracParams p(s, 0.5);
        const Spectrum u = random_spectrum(grid, rng, 6, true);
        const ExtensionField v = extend(u, p);
        const Spectrum d = conormal_derivative(v, ys);
        const Spectrum expected = kappa(s) * apply_bessel_operator(u, p);
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) == 0.0) continue;
            CHECK(std::abs(d[i] - expected[i]) < 1e-4 * std::abs(expected[i]));
        }
    }
}

TEST_CASE("property: interior residual of the extension") {
    std::mt19937_64 rng(43);
    for (double s : {0.25, 0.5, 0.75}) {
        const TorusGrid grid(1, 2.0 * pi, 16);
        const FracParams p(s, 0.3);
        const Spectrum u = random_spectrum(grid, rng, 6, true);
        const double energy = cylinder_energy(extend(u, p));
        const ExtensionField v = extend(u, p);
        for (double y : {1e-3, 0.1, 1.0, 5.0}) {
            const Field r = interior_residual(v, y);
            CHECK(lq_norm(r, 2.0) < 1e-7 * energy);
        }
    }
}

TEST_CASE("unconverged quadrature is reported") {
    const TorusGrid grid(1, 2.0 * pi, 64);
    const FracParams p(0.25, 0.0);
    // modes spanning a factor 30 in decay rate on a tiny rule
    const Spectrum u = Spectrum::mode(grid, {1, 0, 0}, 1.0) + Spectrum::mode(grid, {30, 0, 0}, 1.0);
    CHECK_THROWS_AS(cylinder_energy(u, p, exponential_family(1.0), 6), QuadratureUnconverged);
}
