#include "pfrac/spectral.hpp"

#include "fft.hpp"
#include "pfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pfrac {
namespace {

int axis_wavenumber(int j, int n) { return j <= n / 2 ? j : j - n; }

int axis_slot(int k, int n) { return k >= 0 ? k : k + n; }

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
    if (!(a == b)) throw ParameterError("spectra live on different grids");
}

}  // namespace

TorusGrid::TorusGrid(int dim, double period, int points)
    : dim_(dim), period_(period), points_(points), size_(1) {
    if (dim < 1 || dim > kMaxDim) throw ParameterError("grid dimension must be 1, 2 or 3");
    if (!(period > 0.0) || !std::isfinite(period)) throw ParameterError("period must be positive");
    if (points < 4 || points % 2 != 0) throw ParameterError("points per axis must be even and >= 4");
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(points);
}

double TorusGrid::omega() const noexcept { return 2.0 * std::numbers::pi / period_; }

double TorusGrid::cell_volume() const noexcept {
    return std::pow(period_ / points_, dim_);
}

Wavevector TorusGrid::wavenumber(std::size_t flat) const {
    Wavevector k{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        int j = static_cast<int>(flat % static_cast<std::size_t>(points_));
        flat /= static_cast<std::size_t>(points_);
        k[d] = axis_wavenumber(j, points_);
    }
    return k;
}

double TorusGrid::wavenumber_sq(std::size_t flat) const {
    Wavevector k = wavenumber(flat);
    double sum = 0.0;
    for (int d = 0; d < dim_; ++d) sum += static_cast<double>(k[d]) * k[d];
    return sum;
}

std::size_t TorusGrid::conjugate_index(std::size_t flat) const {
    Wavevector k = wavenumber(flat);
    std::size_t out = 0;
    for (int d = 0; d < dim_; ++d) {
        int neg = -k[d];
        if (neg == -points_ / 2) neg = points_ / 2;
        out = out * static_cast<std::size_t>(points_) + static_cast<std::size_t>(axis_slot(neg, points_));
    }
    return out;
}

bool TorusGrid::on_nyquist(std::size_t flat) const {
    Wavevector k = wavenumber(flat);
    for (int d = 0; d < dim_; ++d)
        if (k[d] == points_ / 2) return true;
    return false;
}

std::size_t TorusGrid::index_of(const Wavevector& k) const {
    std::size_t out = 0;
    for (int d = 0; d < dim_; ++d) {
        if (k[d] <= -points_ / 2 || k[d] > points_ / 2)
            throw DomainError("wavenumber " + std::to_string(k[d]) + " outside the retained band");
        out = out * static_cast<std::size_t>(points_) + static_cast<std::size_t>(axis_slot(k[d], points_));
    }
    return out;
}

Point TorusGrid::coordinate(std::size_t flat) const {
    Point x{0.0, 0.0, 0.0};
    const double h = period_ / points_;
    for (int d = dim_ - 1; d >= 0; --d) {
        x[d] = h * static_cast<double>(flat % static_cast<std::size_t>(points_));
        flat /= static_cast<std::size_t>(points_);
    }
    return x;
}

Field::Field(TorusGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ParameterError("field size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw ParameterError("field values must be finite");
}

Field Field::zeros(const TorusGrid& grid) { return {grid, std::vector<double>(grid.size(), 0.0)}; }

Field Field::from_function(const TorusGrid& grid, const std::function<double(const Point&)>& fn) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid.coordinate(i));
    return {grid, std::move(values)};
}

Spectrum::Spectrum(TorusGrid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw ParameterError("spectrum size does not match grid");
}

Spectrum Spectrum::zeros(const TorusGrid& grid) { return {grid, std::vector<Complex>(grid.size())}; }

Spectrum Spectrum::mode(const TorusGrid& grid, const Wavevector& k, Complex value) {
    std::vector<Complex> c(grid.size());
    std::size_t i = grid.index_of(k);
    std::size_t j = grid.conjugate_index(i);
    if (i == j) {
        c[i] = value.real();
    } else {
        c[i] = value;
        c[j] = std::conj(value);
    }
    return {grid, std::move(c)};
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Spectrum& Spectrum::operator*=(double factor) {
    for (auto& c : coeffs_) c *= factor;
    return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator-(Spectrum a) { return a *= -1.0; }
Spectrum operator*(double factor, Spectrum a) { return a *= factor; }

FracParams::FracParams(double s, double m) : s_(s), m_(m) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("exponent s must lie in (0,1)");
    if (!(m >= 0.0) || !std::isfinite(m)) throw ParameterError("mass m must be finite and >= 0");
}

double FracParams::bessel_multiplier(double freq_sq) const {
    return std::pow(freq_sq + m_ * m_, s_);
}

double FracParams::shifted_multiplier(double freq_sq) const {
    if (freq_sq == 0.0) return 0.0;
    return std::pow(freq_sq + m_ * m_, s_) - mass_term();
}

double FracParams::mass_term() const { return std::pow(m_, 2.0 * s_); }

double FracParams::critical_exponent(int dim) const {
    const double gap = dim - 2.0 * s_;
    if (gap == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * dim / gap;
}

void FracParams::check_dimension(int dim) const {
    if (dim < 2.0 * s_)
        throw ParameterError("dimension N=" + std::to_string(dim) + " must satisfy N >= 2s");
}

std::vector<double> bessel_multipliers(const TorusGrid& grid, const FracParams& params) {
    const double w2 = grid.omega() * grid.omega();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = params.bessel_multiplier(w2 * grid.wavenumber_sq(i));
    return out;
}

std::vector<double> shifted_multipliers(const TorusGrid& grid, const FracParams& params) {
    const double w2 = grid.omega() * grid.omega();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = params.shifted_multiplier(w2 * grid.wavenumber_sq(i));
    return out;
}

Spectrum forward_transform(const Field& field) {
    const TorusGrid& grid = field.grid();
    std::vector<Complex> data(field.values().begin(), field.values().end());
    detail::fft_inplace(data, grid.dim(), grid.points(), -1);
    const double scale = std::pow(grid.period(), 0.5 * grid.dim()) / static_cast<double>(grid.size());
    for (auto& c : data) c *= scale;
    // Remove rounding asymmetry: the exact DFT of real data is Hermitian.
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t j = grid.conjugate_index(i);
        if (j == i) {
            data[i] = data[i].real();
        } else if (j > i) {
            Complex avg = 0.5 * (data[i] + std::conj(data[j]));
            data[i] = avg;
            data[j] = std::conj(avg);
        }
    }
    return {grid, std::move(data)};
}

Field inverse_transform(const Spectrum& spectrum) {
    const double defect = hermitian_defect(spectrum);
    if (defect > 1e-8)
        throw SymmetryViolation("spectrum is not Hermitian (defect " + std::to_string(defect) + ")");
    const TorusGrid& grid = spectrum.grid();
    std::vector<Complex> data(spectrum.coeffs().begin(), spectrum.coeffs().end());
    detail::fft_inplace(data, grid.dim(), grid.points(), +1);
    const double scale = std::pow(grid.period(), -0.5 * grid.dim());
    std::vector<double> values(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) values[i] = scale * data[i].real();
    return {grid, std::move(values)};
}

double hermitian_defect(const Spectrum& spectrum) {
    const TorusGrid& grid = spectrum.grid();
    double scale = 0.0;
    double defect = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        scale = std::max(scale, std::abs(spectrum[i]));
        defect = std::max(defect, std::abs(spectrum[i] - std::conj(spectrum[grid.conjugate_index(i)])));
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

Spectrum apply_bessel_operator(const Spectrum& spectrum, const FracParams& params) {
    const auto mult = bessel_multipliers(spectrum.grid(), params);
    std::vector<Complex> out(spectrum.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mult[i] * spectrum[i];
    return {spectrum.grid(), std::move(out)};
}

Spectrum apply_shifted_operator(const Spectrum& spectrum, const FracParams& params) {
    const auto mult = shifted_multipliers(spectrum.grid(), params);
    std::vector<Complex> out(spectrum.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mult[i] * spectrum[i];
    return {spectrum.grid(), std::move(out)};
}

Spectrum solve_linear(const Spectrum& rhs, const FracParams& params, bool shifted) {
    const auto mult = shifted ? shifted_multipliers(rhs.grid(), params) : bessel_multipliers(rhs.grid(), params);
    std::vector<Complex> out(rhs.size());
    const double norm = l2_norm(rhs);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (mult[i] == 0.0) {
            if (std::abs(rhs[i]) >= 1e-10 * norm && std::abs(rhs[i]) > 0.0)
                throw SingularMode("right-hand side has a nonzero mean while the k=0 multiplier vanishes");
            out[i] = 0.0;
        } else {
            out[i] = rhs[i] / mult[i];
        }
    }
    return {rhs.grid(), std::move(out)};
}

double hs_norm(const Spectrum& spectrum, const FracParams& params) {
    const auto mult = bessel_multipliers(spectrum.grid(), params);
    double sum = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) sum += mult[i] * std::norm(spectrum[i]);
    return std::sqrt(sum);
}

double lq_norm(const Field& field, double q) {
    if (!(q >= 1.0)) throw BadExponent("L^q norm requires q >= 1");
    if (std::isinf(q)) {
        double mx = 0.0;
        for (double v : field.values()) mx = std::max(mx, std::abs(v));
        return mx;
    }
    double sum = 0.0;
    for (double v : field.values()) sum += std::pow(std::abs(v), q);
    return std::pow(sum * field.grid().cell_volume(), 1.0 / q);
}

double l2_norm(const Spectrum& spectrum) {
    double sum = 0.0;
    for (const auto& c : spectrum.coeffs()) sum += std::norm(c);
    return std::sqrt(sum);
}

double inner(const Spectrum& a, const Spectrum& b) {
    require_same_grid(a.grid(), b.grid());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (std::conj(a[i]) * b[i]).real();
    return sum;
}

Spectrum project_zero_mean(const Spectrum& spectrum) {
    std::vector<Complex> c(spectrum.coeffs().begin(), spectrum.coeffs().end());
    c[0] = 0.0;
    return {spectrum.grid(), std::move(c)};
}

Spectrum drop_nyquist(const Spectrum& spectrum) {
    const TorusGrid& grid = spectrum.grid();
    std::vector<Complex> c(spectrum.coeffs().begin(), spectrum.coeffs().end());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (grid.on_nyquist(i)) c[i] = 0.0;
    return {grid, std::move(c)};
}

Spectrum resample(const Spectrum& spectrum, int points) {
    const TorusGrid& src = spectrum.grid();
    if (points == src.points()) return spectrum;
    const TorusGrid dst = src.with_points(points);
    std::vector<Complex> out(dst.size());
    const int dim = src.dim();

    if (points > src.points()) {
        const int nyq = src.points() / 2;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            if (spectrum[i] == Complex(0.0)) continue;
            Wavevector k = src.wavenumber(i);
            std::array<int, kMaxDim> split_axes{};
            int n_split = 0;
            for (int d = 0; d < dim; ++d)
                if (k[d] == nyq) split_axes[n_split++] = d;
            const int copies = 1 << n_split;
            const Complex share = spectrum[i] / static_cast<double>(copies);
            for (int mask = 0; mask < copies; ++mask) {
                Wavevector kk = k;
                for (int b = 0; b < n_split; ++b)
                    if (mask & (1 << b)) kk[split_axes[b]] = -nyq;
                out[dst.index_of(kk)] += share;
            }
        }
    } else {
        const int half = points / 2;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            Wavevector k = src.wavenumber(i);
            bool keep = true;
            for (int d = 0; d < dim; ++d)
                if (k[d] <= -half || k[d] >= half) keep = false;
            if (keep) out[dst.index_of(k)] = spectrum[i];
        }
    }
    return {dst, std::move(out)};
}

}  // namespace pfrac
