#pragma once

namespace pfrac {

struct BesselKPair {
    double k_nu;    // K_nu(x)
    double k_next;  // K_{nu+1}(x)
};

/// Modified Bessel functions of the second kind K_nu(x), K_{nu+1}(x) for
/// real order 0 <= nu < 2.5 and x > 0.
///
/// Temme's series for x <= 2, Steed's continued fraction (CF2) above, both
/// at the reduced order mu = nu - round(nu) in [-1/2, 1/2], followed by
/// upward recurrence. Relative accuracy is near machine precision; values
/// underflow to 0 for x > 700.
BesselKPair bessel_k(double nu, double x);

}  // namespace pfrac
