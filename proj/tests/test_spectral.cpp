#include "doctest.h"

#include "pfrac/errors.hpp"
#include "pfrac/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pfrac;
using std::numbers::pi;

namespace {

const TorusGrid kLine(1, 2.0 * pi, 16);

Spectrum random_band_limited(const TorusGrid& grid, std::mt19937_64& rng, int kmax) {
    std::normal_distribution<double> normal;
    Spectrum out = Spectrum::zeros(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Wavevector k = grid.wavenumber(i);
        bool inside = true;
        for (int d = 0; d < grid.dim(); ++d) inside = inside && std::abs(k[d]) <= kmax;
        if (!inside || grid.conjugate_index(i) < i) continue;
        Complex v(normal(rng), normal(rng));
        if (grid.conjugate_index(i) == i) v = Complex(v.real(), 0.0);
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

TEST_CASE("forward transform of a constant") {
    const Field f = Field::from_function(kLine, [](const Point&) { return 2.5; });
    const Spectrum c = forward_transform(f);
    CHECK(std::abs(c[0] - Complex(2.5 * std::sqrt(2.0 * pi), 0.0)) < 1e-12);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-12);
}

TEST_CASE("forward transform of cos x matches the analytic integral") {
    const Field f = Field::from_function(kLine, [](const Point& x) { return std::cos(x[0]); });
    const Spectrum c = forward_transform(f);
    const double expected = std::sqrt(pi / 2.0);
    CHECK(std::abs(c[kLine.index_of({1, 0, 0})] - expected) < 1e-12);
    CHECK(std::abs(c[kLine.index_of({-1, 0, 0})] - expected) < 1e-12);
    CHECK(std::abs(c[0]) < 1e-12);
}

TEST_CASE("inverse transform reproduces cos x and the constant field") {
    const Field one = inverse_transform(Spectrum::mode(kLine, {0, 0, 0}, std::sqrt(2.0 * pi)));
    for (double v : one.values()) CHECK(std::abs(v - 1.0) < 1e-13);
    const Field c = inverse_transform(Spectrum::mode(kLine, {1, 0, 0}, std::sqrt(pi / 2.0)));
    for (std::size_t j = 0; j < c.size(); ++j)
        CHECK(std::abs(c[j] - std::cos(kLine.coordinate(j)[0])) < 1e-13);
}

TEST_CASE("round trip in one to three dimensions") {
    std::mt19937_64 rng(7);
    for (int dim = 1; dim <= 3; ++dim) {
        const TorusGrid grid(dim, 3.7, dim == 3 ? 8 : 16);
        const Spectrum s = random_band_limited(grid, rng, grid.points() / 2 - 1);
        const Field f = inverse_transform(s);
        const Field back = inverse_transform(forward_transform(f));
        for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(f[j] - back[j]) < 1e-12);
        CHECK(max_abs_diff(forward_transform(f), s) < 1e-12);
    }
}

TEST_CASE("asymmetric spectrum is rejected") {
    std::vector<Complex> coeffs(kLine.size(), Complex(0.0, 0.0));
    coeffs[kLine.index_of({1, 0, 0})] = Complex(1.0, 0.0);
    coeffs[kLine.index_of({-1, 0, 0})] = Complex(1.0 + 1e-3, 0.0);
    CHECK_THROWS_AS(inverse_transform(Spectrum(kLine, coeffs)), SymmetryViolation);
}

TEST_CASE("operator examples on cos x") {
    const Spectrum u = Spectrum::mode(kLine, {1, 0, 0}, std::sqrt(pi / 2.0));
    CHECK(max_abs_diff(apply_bessel_operator(u, FracParams(0.5, 0.0)), u) < 1e-15);
    CHECK(max_abs_diff(apply_bessel_operator(u, FracParams(0.5, 1.0)), std::sqrt(2.0) * u) < 1e-15);
    CHECK(max_abs_diff(apply_shifted_operator(u, FracParams(0.5, 1.0)), (std::sqrt(2.0) - 1.0) * u) < 1e-15);
    CHECK(max_abs_diff(solve_linear(u, FracParams(0.5, 0.0), false), u) < 1e-15);
    CHECK(max_abs_diff(solve_linear(u, FracParams(0.5, 1.0), false), (1.0 / std::sqrt(2.0)) * u) < 1e-15);
}

TEST_CASE("constant mode under the operators") {
    const Spectrum c = Spectrum::mode(kLine, {0, 0, 0}, 3.0);
    for (double s : {0.25, 0.5, 0.75}) {
        const FracParams p(s, 0.7);
        CHECK(std::abs(apply_bessel_operator(c, p)[0] - std::pow(0.7, 2 * s) * 3.0) < 1e-14);
        CHECK(std::abs(apply_shifted_operator(c, p)[0]) == 0.0);
    }
    CHECK_THROWS_AS(solve_linear(c, FracParams(0.5, 0.0), false), SingularMode);
    CHECK_THROWS_AS(solve_linear(c, FracParams(0.5, 1.0), true), SingularMode);
}

TEST_CASE("m = 0 shifted operator is the fractional Laplacian") {
    std::mt19937_64 rng(3);
    const Spectrum u = random_band_limited(kLine, rng, 7);
    const FracParams p(0.3, 0.0);
    CHECK(max_abs_diff(apply_shifted_operator(u, p), apply_bessel_operator(u, p)) < 1e-14);
}

TEST_CASE("norm examples") {
    const Spectrum u = Spectrum::mode(kLine, {1, 0, 0}, std::sqrt(pi / 2.0));
    for (double s : {0.2, 0.5, 0.9}) CHECK(hs_norm(u, FracParams(s, 0.0)) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    const Spectrum c = Spectrum::mode(kLine, {0, 0, 0}, 2.0 * std::sqrt(2.0 * pi));
    CHECK(hs_norm(c, FracParams(0.5, 1.5)) ==
          doctest::Approx(std::sqrt(1.5 * 4.0 * 2.0 * pi)).epsilon(1e-14));
    CHECK_THROWS_AS(FracParams(0.0, 1.0), ParameterError);

    const Field one = Field::from_function(kLine, [](const Point&) { return 1.0; });
    const Field cosx = Field::from_function(kLine, [](const Point& x) { return std::cos(x[0]); });
    CHECK(lq_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
    CHECK(lq_norm(cosx, 2.0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(lq_norm(cosx, 4.0) == doctest::Approx(std::pow(3.0 * pi / 4.0, 0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(lq_norm(cosx, 0.5), BadExponent);
}

TEST_CASE("project_zero_mean") {
    const Spectrum u = Spectrum::mode(kLine, {0, 0, 0}, 3.0) + Spectrum::mode(kLine, {1, 0, 0}, 1.0);
    const Spectrum z = project_zero_mean(u);
    CHECK(z[0] == Complex(0.0, 0.0));
    CHECK(max_abs_diff(z, Spectrum::mode(kLine, {1, 0, 0}, 1.0)) == 0.0);
    CHECK(max_abs_diff(project_zero_mean(z), z) == 0.0);
    CHECK(l2_norm(project_zero_mean(Spectrum::mode(kLine, {0, 0, 0}, 2.0))) == 0.0);
}

TEST_CASE("property: multiplier exactness on single modes") {
    std::mt19937_64 rng(11);
    const TorusGrid grid(2, 5.0, 16);
    std::uniform_int_distribution<int> pick(-7, 8);
    for (int trial = 0; trial < 50; ++trial) {
        const Wavevector k{pick(rng), pick(rng), 0};
        const FracParams p(0.1 + 0.8 * (trial % 9) / 8.0, 0.25 * (trial % 5));
        const Spectrum u = Spectrum::mode(grid, k, Complex(0.3, grid.conjugate_index(grid.index_of(k)) == grid.index_of(k) ? 0.0 : -1.2));
        const Spectrum v = apply_bessel_operator(u, p);
        const double freq = grid.omega() * grid.omega() * (k[0] * k[0] + k[1] * k[1]);
        const double mult = std::pow(freq + p.m() * p.m(), p.s());
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u[i] == Complex(0.0, 0.0)) {
                CHECK(v[i] == Complex(0.0, 0.0));
            } else {
                CHECK(std::abs(v[i] - mult * u[i]) <= 1e-15 * std::abs(mult * u[i]));
            }
        }
    }
}

TEST_CASE("property: solve_linear inverts the operator") {
    std::mt19937_64 rng(5);
    const TorusGrid grid(2, 2.0, 16);
    for (double m : {0.0, 0.5}) {
        const FracParams p(0.35, m);
        Spectrum u = random_band_limited(grid, rng, 7);
        if (m == 0.0) u = project_zero_mean(u);
        const Spectrum back = solve_linear(apply_bessel_operator(u, p), p, false);
        CHECK(max_abs_diff(back, u) < 1e-12 * l2_norm(u));
        const Spectrum z = project_zero_mean(u);
        CHECK(max_abs_diff(solve_linear(apply_shifted_operator(z, p), p, true), z) < 1e-12 * l2_norm(u));
    }
}

TEST_CASE("property: H^s norm monotone in s above unit frequency") {
    std::mt19937_64 rng(9);
    const TorusGrid grid(1, 2.0 * pi, 32);
    const Spectrum u = project_zero_mean(random_band_limited(grid, rng, 15));
    double prev = 0.0;
    for (double s = 0.05; s < 1.0; s += 0.1) {
        const double h = hs_norm(u, FracParams(s, 1.0));
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("property: Parseval and Hermitian symmetry") {
    std::mt19937_64 rng(13);
    const TorusGrid grid(2, 3.0, 16);
    for (int trial = 0; trial < 10; ++trial) {
        const Spectrum s = random_band_limited(grid, rng, 7);
        const Field f = inverse_transform(s);
        CHECK(lq_norm(f, 2.0) * lq_norm(f, 2.0) == doctest::Approx(l2_norm(s) * l2_norm(s)).epsilon(1e-10));
        const FracParams p(0.6, 0.3);
        CHECK(hermitian_defect(apply_bessel_operator(s, p)) < 1e-12);
        CHECK(hermitian_defect(apply_shifted_operator(s, p)) < 1e-12);
        CHECK(hermitian_defect(forward_transform(f)) < 1e-12);
        CHECK(hermitian_defect(resample(s, 32)) < 1e-12);
    }
}

TEST_CASE("resample preserves interior modes") {
    std::mt19937_64 rng(17);
    const Spectrum s = random_band_limited(kLine, rng, 7);
    const Spectrum fine = resample(s, 48);
    const Spectrum back = resample(fine, 16);
    CHECK(max_abs_diff(back, s) < 1e-14);
    const Field f = inverse_transform(s);
    const Field g = inverse_transform(fine);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(f[j] - g[3 * j]) < 1e-12);
}
