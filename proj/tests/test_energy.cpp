#include "doctest.h"

#include "pfrac/energy.hpp"
#include "pfrac/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pfrac;
using std::numbers::pi;

namespace {

const TorusGrid kLine(1, 2.0 * pi, 32);

Spectrum random_spectrum(const TorusGrid& grid, std::mt19937_64& rng, int kmax, double amp, bool mean) {
    std::normal_distribution<double> normal;
    Spectrum out = Spectrum::zeros(grid);
    for (int k = mean ? 0 : 1; k <= kmax; ++k) {
        const double d = amp / (1.0 + k * k);
        out += Spectrum::mode(grid, {k, 0, 0}, Complex(normal(rng) * d, k == 0 ? 0.0 : normal(rng) * d));
    }
    return out;
}

}  // namespace

TEST_CASE("energy examples") {
    const FracParams p(0.5, 1.0);
    const auto spec = NonlinearitySpec::pure_power(3.0, 1, p);
    const EnergyReport zero = evaluate(Spectrum::zeros(kLine), p, spec);
    CHECK(zero.value == 0.0);
    CHECK(zero.quad == 0.0);
    CHECK(zero.nl == 0.0);

    const double c = 1.3;
    const EnergyReport constant = evaluate(Spectrum::mode(kLine, {0, 0, 0}, c * std::sqrt(2.0 * pi)), p, spec);
    CHECK(constant.quad == 0.0);
    CHECK(constant.value == doctest::Approx(-2.0 * pi * std::pow(c, 4) / 4.0).epsilon(1e-13));

    const double t = 2.0;
    const Spectrum u = Spectrum::mode(kLine, {1, 0, 0}, t * std::sqrt(pi / 2.0));
    const EnergyReport r = evaluate(u, p, NonlinearitySpec::zero());
    CHECK(r.quad == doctest::Approx(0.5 * (std::sqrt(2.0) - 1.0) * pi * t * t).epsilon(1e-14));
    CHECK(r.value == r.quad - r.nl);
}

TEST_CASE("gradient vanishes at zero and on a frozen linear probe") {
    const FracParams p(0.4, 0.8);
    const auto spec = NonlinearitySpec::pure_power(3.0, 1, p);
    CHECK(l2_norm(gradient(Spectrum::zeros(kLine), p, spec)) == 0.0);

    std::mt19937_64 rng(2);
    const Spectrum g = random_spectrum(kLine, rng, 10, 1.0, false);
    const Spectrum u = solve_linear(g, p, true);
    const auto probe = NonlinearitySpec::forcing(inverse_transform(g));
    CHECK(l2_norm(gradient(u, p, probe)) < 1e-12);
}

TEST_CASE("property: directional derivative in both metrics") {
    std::mt19937_64 rng(4);
    for (double s : {0.25, 0.5, 0.75}) {
        for (double m : {0.0, 1.0}) {
            const FracParams p(s, m);
            const auto spec = NonlinearitySpec::pure_power(s == 0.75 ? 3.0 : 2.0, 1, FracParams(0.5, 1.0));
            for (int trial = 0; trial < 20; ++trial) {
                const Spectrum u = random_spectrum(kLine, rng, 12, 2.0, true);
                const Spectrum w = random_spectrum(kLine, rng, 12, 1.0, true);
                const double eps = 1e-5;
                const double fd = (evaluate(u + eps * w, p, spec).value - evaluate(u - eps * w, p, spec).value) / (2.0 * eps);
                const double l2 = inner(gradient(u, p, spec, Metric::L2), w);
                CHECK(std::abs(fd - l2) < 1e-6 * std::abs(l2));
                // the X gradient pairs with w through the H^s inner product
                const Spectrum gx = gradient(u, p, spec, Metric::X);
                const auto mult = bessel_multipliers(kLine, p);
                double hx = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i)
                    hx += (mult[i] == 0.0 ? 1.0 : mult[i]) * (std::conj(gx[i]) * w[i]).real();
                CHECK(std::abs(fd - hx) < 1e-6 * std::abs(hx));
            }
        }
    }
}

TEST_CASE("quadratic gap") {
    const FracParams p(0.5, 1.0);
    const Spectrum u = Spectrum::mode(kLine, {1, 0, 0}, 1.0);
    CHECK(quadratic_gap(u, p) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(coercivity_constant(kLine, p) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(quadratic_gap(Spectrum::mode(kLine, {0, 0, 0}, 1.0), p), DomainError);
    CHECK_THROWS_AS(quadratic_gap(Spectrum::zeros(kLine), p), DomainError);
}

TEST_CASE("property: nonnegativity and coercivity of the quadratic part") {
    std::mt19937_64 rng(6);
    for (double s : {0.2, 0.5, 0.8}) {
        for (double m : {0.0, 0.3, 2.0}) {
            const FracParams p(s, m);
            for (int trial = 0; trial < 20; ++trial) {
                const Spectrum u = random_spectrum(kLine, rng, 15, 1.0, true);
                CHECK(quadratic_part(u, p) >= 0.0);
                const Spectrum z = project_zero_mean(u);
                CHECK(quadratic_gap(z, p) >= coercivity_constant(kLine, p) - 1e-12);
            }
            CHECK(quadratic_part(Spectrum::mode(kLine, {0, 0, 0}, 4.0), p) == 0.0);
        }
    }
}

TEST_CASE("property: the functional is eventually negative along rays") {
    std::mt19937_64 rng(7);
    const FracParams p(0.5, 1.0);
    const auto spec = NonlinearitySpec::pure_power(3.0, 1, p);
    for (int trial = 0; trial < 10; ++trial) {
        const Spectrum z = random_spectrum(kLine, rng, 10, 1.0, false);
        bool negative = false;
        for (double t = 1.0; t < 1e4 && !negative; t *= 2.0) negative = evaluate(t * z, p, spec).value < 0.0;
        CHECK(negative);
    }
}
