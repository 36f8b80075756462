#include "pfrac/bessel.hpp"

#include "pfrac/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace pfrac {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 20000;

// Even-index Taylor coefficients a_2, a_4, ... of 1/Gamma(z) = sum a_k z^k.
constexpr std::array<double, 8> kRecipGammaEven = {
    0.5772156649015329,  -0.0420026350340952, -0.0421977345555443, 0.0072189432466630,
    -0.0002152416741149, -0.0000201348547807, 0.0000011330272320,  0.0000000061160950,
};

// gamma1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu); the direct quotient
// cancels badly for small mu, where the odd part of the 1/Gamma series is used.
double temme_gamma1(double mu) {
    if (std::abs(mu) >= 0.2) return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
    const double mu2 = mu * mu;
    double sum = 0.0;
    for (auto it = kRecipGammaEven.rbegin(); it != kRecipGammaEven.rend(); ++it) sum = sum * mu2 + *it;
    return -sum;
}

BesselKPair reduced_order_series(double mu, double x) {
    const double gam_plus = 1.0 / std::tgamma(1.0 + mu);
    const double gam_minus = 1.0 / std::tgamma(1.0 - mu);
    const double gam1 = temme_gamma1(mu);
    const double gam2 = 0.5 * (gam_minus + gam_plus);

    const double half_x = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(half_x);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gam_plus;
    double q = 0.5 / (e * gam_minus);
    double c = 1.0;
    d = half_x * half_x;
    double sum1 = p;
    const double mu2 = mu * mu;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return {sum, sum1 * 2.0 / x};
}

BesselKPair reduced_order_fraction(double mu, double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h *= a1;
    const double k_mu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    return {k_mu, k_mu * (mu + x + 0.5 - h) / x};
}

}  // namespace

BesselKPair bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("K_nu requires x > 0");
    if (!(nu >= 0.0 && nu < 2.5)) throw DomainError("K_nu implemented for 0 <= nu < 2.5");
    if (x > 700.0) return {0.0, 0.0};

    const int shift = static_cast<int>(std::lround(nu));
    const double mu = nu - shift;
    BesselKPair k = x <= 2.0 ? reduced_order_series(mu, x) : reduced_order_fraction(mu, x);
    for (int i = 1; i <= shift; ++i) {
        const double next = (mu + i) * (2.0 / x) * k.k_next + k.k_nu;
        k.k_nu = k.k_next;
        k.k_next = next;
    }
    return k;
}

}  // namespace pfrac
