#pragma once

// Torus grids, real fields, truncated Fourier spectra and the exact
// Fourier-multiplier realization of (-Delta + m^2)^s on (0,T)^N.
//
// Normalization: a T-periodic field is u(x) = sum_k c_k e^{i w k.x} / sqrt(T^N)
// with w = 2 pi / T, so c_k = T^{-N/2} int u e^{-i w k.x} dx. The coefficients
// are therefore independent of the number of grid points, and the squared
// L2 norm of u equals sum_k |c_k|^2.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pfrac {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 3;
using Wavevector = std::array<int, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Uniform periodic grid on (0,T)^N with n points per axis.
///
/// Storage is row-major (last axis fastest). Per axis the storage index j
/// maps to the wavenumber j for j <= n/2 and to j - n otherwise, so the
/// retained band is {-n/2+1, ..., n/2}^N.
class TorusGrid {
public:
    TorusGrid(int dim, double period, int points);

    int dim() const noexcept { return dim_; }
    double period() const noexcept { return period_; }
    int points() const noexcept { return points_; }
    double omega() const noexcept;
    std::size_t size() const noexcept { return size_; }
    double cell_volume() const noexcept;

    Wavevector wavenumber(std::size_t flat) const;
    double wavenumber_sq(std::size_t flat) const;
    /// Storage index of -k (mod n). Self-conjugate slots map to themselves.
    std::size_t conjugate_index(std::size_t flat) const;
    /// True when some component of k equals n/2.
    bool on_nyquist(std::size_t flat) const;
    /// Storage index of a wavevector inside the band; throws DomainError otherwise.
    std::size_t index_of(const Wavevector& k) const;
    Point coordinate(std::size_t flat) const;

    TorusGrid with_points(int points) const { return {dim_, period_, points}; }

    bool operator==(const TorusGrid& other) const noexcept {
        return dim_ == other.dim_ && period_ == other.period_ && points_ == other.points_;
    }

private:
    int dim_;
    double period_;
    int points_;
    std::size_t size_;
};

/// Real samples u(x_j) at x_j = j T / n.
class Field {
public:
    Field(TorusGrid grid, std::vector<double> values);

    static Field zeros(const TorusGrid& grid);
    static Field from_function(const TorusGrid& grid, const std::function<double(const Point&)>& fn);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

/// Truncated complex Fourier coefficients of a real field.
class Spectrum {
public:
    Spectrum(TorusGrid grid, std::vector<Complex> coeffs);

    static Spectrum zeros(const TorusGrid& grid);
    /// c_k = value and c_{-k} = conj(value) (a single real Fourier mode pair).
    static Spectrum mode(const TorusGrid& grid, const Wavevector& k, Complex value);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    Complex operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Spectrum& operator+=(const Spectrum& other);
    Spectrum& operator-=(const Spectrum& other);
    Spectrum& operator*=(double factor);

private:
    TorusGrid grid_;
    std::vector<Complex> coeffs_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a);
Spectrum operator*(double factor, Spectrum a);

/// Exponent s in (0,1) and mass m >= 0 of the operator (-Delta + m^2)^s.
class FracParams {
public:
    FracParams(double s, double m);

    double s() const noexcept { return s_; }
    double m() const noexcept { return m_; }

    /// (w^2 |k|^2 + m^2)^s for a given w^2 |k|^2.
    double bessel_multiplier(double freq_sq) const;
    /// (w^2 |k|^2 + m^2)^s - m^{2s}; exactly zero at freq_sq = 0.
    double shifted_multiplier(double freq_sq) const;
    /// m^{2s}
    double mass_term() const;

    /// 2N / (N - 2s); +infinity in the borderline case N = 2s.
    double critical_exponent(int dim) const;
    /// Throws ParameterError unless N >= 2s (see critical_exponent).
    void check_dimension(int dim) const;

    FracParams with_mass(double m) const { return {s_, m}; }

private:
    double s_;
    double m_;
};

std::vector<double> bessel_multipliers(const TorusGrid& grid, const FracParams& params);
std::vector<double> shifted_multipliers(const TorusGrid& grid, const FracParams& params);

Spectrum forward_transform(const Field& field);
/// Throws SymmetryViolation when the Hermitian defect exceeds 1e-8 (relative).
Field inverse_transform(const Spectrum& spectrum);

/// max_k |c_k - conj(c_{-k})| relative to max_k |c_k|.
double hermitian_defect(const Spectrum& spectrum);

Spectrum apply_bessel_operator(const Spectrum& spectrum, const FracParams& params);
Spectrum apply_shifted_operator(const Spectrum& spectrum, const FracParams& params);
/// Inverts the (shifted) multiplier. Throws SingularMode if the k = 0
/// multiplier vanishes while |g_0| >= 1e-10 ||g||.
Spectrum solve_linear(const Spectrum& rhs, const FracParams& params, bool shifted);

double hs_norm(const Spectrum& spectrum, const FracParams& params);
/// Periodic trapezoid rule; q may be +infinity. Throws BadExponent for q < 1.
double lq_norm(const Field& field, double q);
/// sqrt(sum |c_k|^2), the L2 norm of the underlying field.
double l2_norm(const Spectrum& spectrum);
/// Re sum conj(a_k) b_k, the L2 inner product of the underlying real fields.
double inner(const Spectrum& a, const Spectrum& b);

Spectrum project_zero_mean(const Spectrum& spectrum);
/// Zeroes every slot with a component on the Nyquist wavenumber n/2.
Spectrum drop_nyquist(const Spectrum& spectrum);

/// Moves a spectrum to a grid with a different number of points per axis.
/// Refinement zero-pads, splitting Nyquist slots evenly between +n/2 and
/// -n/2 so the padded field is the real trigonometric interpolant.
/// Coarsening truncates and drops the coarse Nyquist slots.
Spectrum resample(const Spectrum& spectrum, int points);

}  // namespace pfrac
