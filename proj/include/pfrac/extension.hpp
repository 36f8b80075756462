#pragma once

// Extension of a trace u on (0,T)^N to the half-cylinder (0,T)^N x (0,inf).
//
// Ext(u)(x,y) = sum_k c_k theta(lambda_k y) e^{i w k.x} / sqrt(T^N) with
// lambda_k = sqrt(w^2 |k|^2 + m^2). Each mode solves the degenerate problem
// -div(y^{1-2s} grad v) + m^2 y^{1-2s} v = 0, and the weighted energy
//
//   ||v||^2 = int int y^{1-2s} (|grad v|^2 + m^2 v^2) dx dy
//
// reduces mode by mode to kappa_s lambda_k^{2s} |c_k|^2.

#include "pfrac/spectral.hpp"
#include "pfrac/theta.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pfrac {

/// Analytic extension: base spectrum plus the shared theta profile.
class ExtensionField {
public:
    ExtensionField(Spectrum base, FracParams params, std::shared_ptr<const ThetaProfile> profile);

    const Spectrum& base() const noexcept { return base_; }
    const FracParams& params() const noexcept { return params_; }
    const ThetaProfile& profile() const noexcept { return *profile_; }
    std::shared_ptr<const ThetaProfile> shared_profile() const noexcept { return profile_; }

    /// sqrt(w^2 |k|^2 + m^2) for storage slot `flat`.
    double rate(std::size_t flat) const;

    /// Spectrum of v(., y); y = 0 returns the base spectrum.
    Spectrum slice(double y) const;
    /// Spectrum of d/dy v(., y) for y > 0.
    Spectrum slice_dy(double y) const;
    /// Point evaluation v(x, y).
    double value(const Point& x, double y) const;

private:
    Spectrum base_;
    FracParams params_;
    std::shared_ptr<const ThetaProfile> profile_;
};

/// Throws ZeroModeNoDecay if m = 0 and |c_0| > 1e-12 ||u||.
ExtensionField extend(const Spectrum& u, const FracParams& params);
ExtensionField extend(const Spectrum& u, const FracParams& params,
                      std::shared_ptr<const ThetaProfile> profile);

/// One-dimensional rule for int_0^inf y^{1-2s} g(y) dy.
struct YRule {
    std::vector<double> nodes;    // strictly increasing, positive
    std::vector<double> weights;  // positive, include the factor y^{1-2s}
};

/// Samples of a generic function on the half-cylinder.
///
/// Values and y-derivatives are stored on separate y rules: y^{1-2s} v^2
/// and y^{1-2s} (dv/dy)^2 have different algebraic behaviour at y = 0
/// (like y^{1-2s} and y^{2s-1} for extension-type profiles), so each gets
/// its own Gauss-Jacobi endpoint weight. Row r of `values` holds the field
/// at value_rule.nodes[r]; the layout is [row * grid.size() + x].
struct CylinderFunction {
    TorusGrid grid;
    double s;
    YRule value_rule;
    std::vector<double> values;
    YRule slope_rule;
    std::vector<double> dy_values;
    /// Exact trace v(., 0) when the generator knows it.
    std::optional<std::vector<double>> trace;

    std::span<const double> value_row(std::size_t r) const;
    std::span<const double> slope_row(std::size_t r) const;
};

/// Weighted rules on (0, inf) for a cylinder function with exponent s.
/// `scale` should be about 1/(slowest decay rate in y).
YRule value_y_rule(double s, int nodes, double scale);
YRule slope_y_rule(double s, int nodes, double scale);

/// A family of separable y-profiles phi(lambda, y) with phi(lambda, 0) = 1,
/// used as v(x,y) = sum_k c_k phi(lambda_k, y) e^{i w k.x} / sqrt(T^N).
struct ProfileFamily {
    std::function<double(double lambda, double y)> value;
    std::function<double(double lambda, double y)> slope;  // d/dy
    /// Slowest decay rate in y relative to lambda; sets the y scale.
    double decay = 1.0;
};

/// phi(lambda, y) = theta(lambda y): the extension itself.
ProfileFamily theta_family(std::shared_ptr<const ThetaProfile> profile);
/// phi(lambda, y) = exp(-factor lambda y).
ProfileFamily exponential_family(double factor);

/// Samples a separable function on `nodes`-point y rules. The y scale is
/// 1 / (smallest lambda_k among nonzero modes). Throws ZeroModeNoDecay when a
/// nonzero mode has lambda_k = 0.
CylinderFunction sample_separable(const Spectrum& trace, const FracParams& params,
                                  const ProfileFamily& family, int nodes);
/// Dense sampling of an extension (with exact trace row).
CylinderFunction sample_extension(const ExtensionField& v, int nodes);

/// kappa_s ||u||^2_{H^s}, by the universal profile integrals.
double cylinder_energy(const ExtensionField& v);
/// Tensor quadrature: Parseval in x on each row, the weighted rules in y.
double cylinder_energy(const CylinderFunction& v, const FracParams& params);
/// Energy of a separable family, sampled at `nodes` and 3*nodes/2 points.
/// Throws QuadratureUnconverged if the two disagree by more than 1e-6 relative.
double cylinder_energy(const Spectrum& trace, const FracParams& params,
                       const ProfileFamily& family, int nodes = 200);

/// Trace row: stored if available, else linear extrapolation from the two
/// smallest value nodes.
Field cylinder_trace(const CylinderFunction& v);

/// ||v||^2 - kappa_s |Tr v|^2_{H^s_{m,T}}, nonnegative up to quadrature error.
double sharp_trace_gap(const CylinderFunction& v, const FracParams& params);
/// ||v||^2 - kappa_s m^{2s} |Tr v|^2_{L^2}. Throws DomainError if m = 0.
double ground_gap(const CylinderFunction& v, const FracParams& params);

/// Richardson limit of -y^{1-2s} dv/dy as y -> 0, mode by mode; should equal
/// kappa_s (-Delta + m^2)^s u. Throws ExtrapolationDiverged when the
/// elimination table of a mode carrying at least 1e-8 of the energy is not
/// Cauchy.
Spectrum conormal_derivative(const ExtensionField& v, std::span<const double> y_list);

/// Pointwise -div(y^{1-2s} grad v) + m^2 y^{1-2s} v on the slice y (y > 0),
/// evaluated mode by mode from the profile derivatives.
Field interior_residual(const ExtensionField& v, double y);

}  // namespace pfrac
