#include "pfrac/linking.hpp"

#include "pfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace pfrac {
namespace {

constexpr int kMaxCapDoublings = 16;
constexpr double kArmijoSlope = 1e-4;
constexpr double kCollapseNorm = 1e-8;

double hs_inner(const Spectrum& a, const Spectrum& b, const std::vector<double>& mult) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += mult[i] * (std::conj(a[i]) * b[i]).real();
    return sum;
}

Spectrum scaled_by(const Spectrum& v, const std::vector<double>& factor) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = factor[i] * v[i];
    return Spectrum(v.grid(), std::move(out));
}

Spectrum normalized_direction(const Spectrum& v, const FracParams& params) {
    const Spectrum z = drop_nyquist(project_zero_mean(v));
    const double h = hs_norm(z, params);
    if (!(h > 0.0)) throw ParameterError("direction has no zero-mean component");
    return (1.0 / h) * z;
}

// I_m restricted to the sheet {a e0 + r w}, with w zero-mean. The quadratic
// part is r^2 Q(w) because e0 lies in the kernel of the shifted operator;
// the nonlinear part is summed on the dealiasing grid exactly as in
// nonlinear_energy_padded.
class Sheet {
public:
    struct Local {
        double value, ga, gr, haa, har, hrr;
    };

    Sheet(const Spectrum& w, const FracParams& params, const NonlinearitySpec& spec)
        : spec_(&spec), quad_(quadratic_part(w, params)) {
        const TorusGrid& grid = w.grid();
        const int points = spec.padded_points(grid.points());
        const Field fine = inverse_transform(resample(drop_nyquist(w), points));
        w_.assign(fine.values().begin(), fine.values().end());
        coef_ = spec.coefficient_on(points);
        cell_ = fine.grid().cell_volume();
        e0_ = 1.0 / std::sqrt(std::pow(grid.period(), grid.dim()));
    }

    double value(double a, double r) const {
        double nl = 0.0;
        for (std::size_t j = 0; j < w_.size(); ++j) nl += spec_->F_with(coef(j), a * e0_ + r * w_[j]);
        return r * r * quad_ - nl * cell_;
    }

    Local local(double a, double r) const {
        double F = 0.0, fa = 0.0, fr = 0.0, daa = 0.0, dar = 0.0, drr = 0.0;
        for (std::size_t j = 0; j < w_.size(); ++j) {
            const double c = coef(j);
            const double t = a * e0_ + r * w_[j];
            const double f = spec_->f_with(c, t);
            const double d = spec_->df_with(c, t);
            F += spec_->F_with(c, t);
            fa += f * e0_;
            fr += f * w_[j];
            daa += d * e0_ * e0_;
            dar += d * e0_ * w_[j];
            drr += d * w_[j] * w_[j];
        }
        return {r * r * quad_ - F * cell_, -fa * cell_, 2.0 * r * quad_ - fr * cell_,
                -daa * cell_, -dar * cell_, 2.0 * quad_ - drr * cell_};
    }

private:
    double coef(std::size_t j) const { return coef_.empty() ? 1.0 : coef_[j]; }

    const NonlinearitySpec* spec_;
    double quad_;
    std::vector<double> w_;
    std::vector<double> coef_;
    double cell_ = 0.0;
    double e0_ = 0.0;
};

struct SheetMax {
    double a, r, value;
};

// Damped Newton ascent for max over (a, r >= 0) of the sheet functional.
SheetMax maximize_on_sheet(const Sheet& sheet, double a, double r) {
    r = std::max(r, 0.0);
    Sheet::Local L = sheet.local(a, r);
    for (int it = 0; it < 200; ++it) {
        double da, dr;
        const double det = L.haa * L.hrr - L.har * L.har;
        if (L.haa < 0.0 && det > 0.0) {
            da = -(L.hrr * L.ga - L.har * L.gr) / det;
            dr = -(-L.har * L.ga + L.haa * L.gr) / det;
        } else {
            const double scale = std::max({std::abs(L.haa), std::abs(L.hrr), 1.0});
            da = L.ga / scale;
            dr = L.gr / scale;
        }
        double t = 1.0;
        double na = a, nr = r;
        Sheet::Local next = L;
        for (int back = 0; back < 60; ++back) {
            na = a + t * da;
            nr = std::max(r + t * dr, 0.0);
            next = sheet.local(na, nr);
            if (next.value >= L.value - 1e-15 * std::abs(L.value)) break;
            t *= 0.5;
        }
        const double move = std::abs(na - a) + std::abs(nr - r);
        a = na;
        r = nr;
        L = next;
        if (move <= 1e-15 * (1.0 + std::abs(a) + std::abs(r))) break;
    }
    return {a, r, L.value};
}

Spectrum random_zero_mean(const TorusGrid& grid, const FracParams& params, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const auto mult = bessel_multipliers(grid, params);
    std::vector<Complex> c(grid.size());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const std::size_t j = grid.conjugate_index(i);
        if (j < i || grid.on_nyquist(i)) continue;
        const double sd = 1.0 / std::sqrt(mult[i]);
        const Complex v(normal(rng) * sd, j == i ? 0.0 : normal(rng) * sd);
        c[i] = v;
        c[j] = std::conj(v);
    }
    return Spectrum(grid, std::move(c));
}

// min of I over the zero-mean H^s sphere of radius eta, polished by
// projected X-gradient descent from the starting direction.
double polish_on_sphere(Spectrum v, double eta, const FracParams& params, const NonlinearitySpec& spec) {
    const auto mult = bessel_multipliers(v.grid(), params);
    double level = evaluate(eta * v, params, spec).value;
    double tau = 1.0;
    for (int it = 0; it < 40; ++it) {
        Spectrum g = drop_nyquist(project_zero_mean(gradient(eta * v, params, spec, Metric::X)));
        g -= hs_inner(g, v, mult) * v;
        const double gnorm = std::sqrt(std::max(hs_inner(g, g, mult), 0.0));
        if (gnorm < 1e-12) break;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            Spectrum trial = v - (tau / eta) * g;
            trial *= 1.0 / std::sqrt(hs_inner(trial, trial, mult));
            const double next = evaluate(eta * trial, params, spec).value;
            if (next <= level - kArmijoSlope * tau * gnorm * gnorm / eta) {
                v = std::move(trial);
                level = next;
                accepted = true;
                tau = std::min(2.0 * tau, 4.0);
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
    }
    return level;
}

struct Caps {
    double ray;
    double y;
};

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return out;
}

// Largest value of I on the sampled boundary of A, split by side.
struct BoundaryScan {
    double bottom = -std::numeric_limits<double>::infinity();
    double top = -std::numeric_limits<double>::infinity();
    double sides = -std::numeric_limits<double>::infinity();
};

BoundaryScan scan_boundary(const Sheet& zsheet, const Caps& caps, int n_c, int n_r) {
    BoundaryScan b;
    for (double c : linspace(-caps.y, caps.y, n_c)) {
        b.bottom = std::max(b.bottom, zsheet.value(c, 0.0));
        b.top = std::max(b.top, zsheet.value(c, caps.ray));
    }
    for (double r : linspace(0.0, caps.ray, n_r)) {
        b.sides = std::max(b.sides, zsheet.value(-caps.y, r));
        b.sides = std::max(b.sides, zsheet.value(caps.y, r));
    }
    return b;
}

// Enlarges R and R' until I <= 0 on the sampled boundary of A.
bool calibrate_caps(const Sheet& zsheet, Caps& caps, int n_c, int n_r) {
    for (int attempt = 0; attempt <= kMaxCapDoublings; ++attempt) {
        const BoundaryScan b = scan_boundary(zsheet, caps, n_c, n_r);
        if (b.bottom > 0.0) return false;
        if (b.top <= 0.0 && b.sides <= 0.0) return true;
        if (b.top > 0.0) caps.ray *= 2.0;
        if (b.sides > 0.0) caps.y *= 2.0;
    }
    return false;
}

// Without linking geometry, follow the X-gradient flow from the far end of
// the ray; a collapse to 0 means no nontrivial critical point was found.
void collapse_or_throw(const Spectrum& start, const FracParams& params, const NonlinearitySpec& spec,
                       const LinkingConfig& cfg, const Caps& caps) {
    Spectrum u = start;
    double level = evaluate(u, params, spec).value;
    double tau = cfg.descent_step;
    for (int it = 0; it < cfg.max_iters; ++it) {
        if (hs_norm(u, params) < kCollapseNorm)
            throw NoNontrivialSolution("descent flow from the linking boundary collapses to u = 0");
        const Spectrum g = gradient(u, params, spec, Metric::X);
        const double gn = dual_norm(gradient(u, params, spec, Metric::L2), params);
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            const Spectrum trial = u - tau * g;
            const double next = evaluate(trial, params, spec).value;
            if (next <= level - kArmijoSlope * tau * gn * gn) {
                u = trial;
                level = next;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
    }
    throw BoundaryNotNegative(caps.ray, caps.y, "I > 0 on the sampled boundary after enlarging the caps");
}

// Deterministic sign: the largest coefficient (lowest slot on ties) gets a
// positive leading component.
Spectrum canonical_sign(const Spectrum& u) {
    double best = 0.0;
    std::size_t slot = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > best * (1.0 + 1e-12)) {
            best = std::abs(u[i]);
            slot = i;
        }
    }
    const Complex c = u[slot];
    const double lead = std::abs(c.real()) > 1e-12 * best ? c.real() : c.imag();
    return lead < 0.0 ? -u : u;
}

}  // namespace

Decomposition decompose(const Spectrum& u) {
    Spectrum y = Spectrum::zeros(u.grid());
    y += Spectrum::mode(u.grid(), {0, 0, 0}, u[0]);
    return {y, project_zero_mean(u)};
}

Spectrum y_direction(const TorusGrid& grid) { return Spectrum::mode(grid, {0, 0, 0}, 1.0); }

Spectrum pick_z_direction(const TorusGrid& grid, const FracParams& params) {
    const double w = grid.omega();
    const int dim = grid.dim();
    const Field f = Field::from_function(grid, [&](const Point& x) {
        double prod = 1.0;
        for (int d = 0; d < dim; ++d) prod *= std::sin(w * x[d]);
        return prod;
    });
    return normalized_direction(forward_transform(f), params);
}

std::vector<double> default_probe_radii() {
    std::vector<double> out;
    for (int j = 0; j < 10; ++j) out.push_back(0.05 * std::pow(2.0, j));
    return out;
}

RidgeEstimate ridge_estimate(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                             const std::vector<double>& probe_radii, std::uint64_t seed, int random_directions) {
    if (probe_radii.empty()) throw ParameterError("ridge estimate needs probe radii");
    for (std::size_t i = 0; i < probe_radii.size(); ++i)
        if (!(probe_radii[i] > 0.0) || (i > 0 && !(probe_radii[i] > probe_radii[i - 1])))
            throw ParameterError("probe radii must be positive and increasing");

    std::vector<Spectrum> directions;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < random_directions; ++i)
        directions.push_back(normalized_direction(random_zero_mean(grid, params, rng), params));
    const int kmax = std::min(3, grid.points() / 2 - 1);
    for (int d = 0; d < grid.dim(); ++d) {
        for (int k = 1; k <= kmax; ++k) {
            Wavevector kv{0, 0, 0};
            kv[d] = k;
            directions.push_back(normalized_direction(Spectrum::mode(grid, kv, 1.0), params));
            directions.push_back(normalized_direction(Spectrum::mode(grid, kv, Complex(0.0, -1.0)), params));
        }
    }
    directions.push_back(pick_z_direction(grid, params));

    RidgeEstimate out;
    out.rho = -std::numeric_limits<double>::infinity();
    for (double eta : probe_radii) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < directions.size(); ++i) {
            const double v = evaluate(eta * directions[i], params, spec).value;
            if (v < best) {
                best = v;
                best_index = i;
            }
        }
        best = std::min(best, polish_on_sphere(directions[best_index], eta, params, spec));
        out.profile.emplace_back(eta, best);
        if (best > out.rho) {
            out.rho = best;
            out.eta = eta;
        }
    }
    if (!(out.rho > 0.0)) throw NoPositiveRidge("sampled infimum of I on every probe sphere is <= 0");
    return out;
}

void LinkingConfig::validate() const {
    if (!(ray_cap > 0.0) || !(y_cap > 0.0)) throw ParameterError("linking caps R, R' must be positive");
    if (n_c < 3 || n_r < 3) throw ParameterError("linking grid needs at least 3 x 3 nodes");
    if (!(descent_step > 0.0)) throw ParameterError("descent step must be positive");
    if (!(ps_tol > 0.0)) throw ParameterError("ps_tol must be positive");
    if (max_iters < 1) throw ParameterError("max_iters must be positive");
    if (random_directions < 0) throw ParameterError("random_directions must be nonnegative");
}

std::string to_string(SolverStatus status) {
    switch (status) {
        case SolverStatus::Converged: return "Converged";
        case SolverStatus::MaxIters: return "MaxIters";
        case SolverStatus::NoNontrivialSolution: return "NoNontrivialSolution";
    }
    return "Unknown";
}

std::pair<double, double> LinkingSurface::parameter(int i, int j) const {
    const double c = -y_cap + 2.0 * y_cap * i / (n_c - 1);
    const double r = ray_cap * j / (n_r - 1);
    return {c, r};
}

bool LinkingSurface::on_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_c - 1 || j == n_r - 1; }

Spectrum LinkingSurface::point(int i, int j) const {
    const auto [c, r] = parameter(i, j);
    const Spectrum& dir = on_boundary(i, j) ? z : w;
    return c * y_direction(z.grid()) + r * dir;
}

std::vector<double> surface_levels(const LinkingSurface& surface, const FracParams& params,
                                   const NonlinearitySpec& spec) {
    const Sheet zsheet(surface.z, params, spec);
    const Sheet wsheet(surface.w, params, spec);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(surface.n_c) * surface.n_r);
    for (int i = 0; i < surface.n_c; ++i) {
        for (int j = 0; j < surface.n_r; ++j) {
            const auto [c, r] = surface.parameter(i, j);
            out.push_back(surface.on_boundary(i, j) ? zsheet.value(c, r) : wsheet.value(c, r));
        }
    }
    return out;
}

double linking_set_max(const Spectrum& z, double ray_cap, double y_cap, int n_c, int n_r, const FracParams& params,
                       const NonlinearitySpec& spec) {
    const Spectrum dir = normalized_direction(z, params);
    const Sheet sheet(dir, params, spec);
    double best = -std::numeric_limits<double>::infinity();
    double bc = 0.0, br = 0.0;
    for (double c : linspace(-y_cap, y_cap, n_c)) {
        for (double r : linspace(0.0, ray_cap, n_r)) {
            const double v = sheet.value(c, r);
            if (v > best) {
                best = v;
                bc = c;
                br = r;
            }
        }
    }
    const SheetMax polished = maximize_on_sheet(sheet, bc, br);
    if (std::abs(polished.a) <= y_cap && polished.r <= ray_cap) best = std::max(best, polished.value);
    return best;
}

SolverState minimax_search(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                           const LinkingConfig& cfg) {
    return minimax_search(grid, params, spec, cfg, pick_z_direction(grid, params));
}

SolverState minimax_search(const TorusGrid& grid, const FracParams& params, const NonlinearitySpec& spec,
                           const LinkingConfig& cfg, const Spectrum& z_in) {
    cfg.validate();
    spec.check_grid(grid);
    if (!(z_in.grid() == grid)) throw ParameterError("z direction lives on a different grid");
    const Spectrum z = normalized_direction(z_in, params);
    const auto mult = bessel_multipliers(grid, params);
    const Spectrum e0 = y_direction(grid);

    SolverState state{Spectrum::zeros(grid), 0.0, 0.0, {}, SolverStatus::MaxIters, 0.0, 0.0, 0.0,
                      LinkingSurface{0.0, 0.0, cfg.n_c, cfg.n_r, z, z}};
    const RidgeEstimate ridge = ridge_estimate(grid, params, spec, cfg.probe_radii, cfg.seed, cfg.random_directions);
    state.rho = ridge.rho;
    state.eta = ridge.eta;

    Caps caps{std::max(cfg.ray_cap, 2.0 * ridge.eta), cfg.y_cap};
    const Sheet zsheet(z, params, spec);
    if (!calibrate_caps(zsheet, caps, cfg.n_c, cfg.n_r)) collapse_or_throw(caps.ray * z, params, spec, cfg, caps);
    state.surface.ray_cap = caps.ray;
    state.surface.y_cap = caps.y;

    state.delta_hat = linking_set_max(z, caps.ray, caps.y, cfg.n_c, cfg.n_r, params, spec);

    Spectrum w = z;
    double a = 0.0, r = 0.0;
    bool have_warm = false;
    double tau = cfg.descent_step;
    double best_level = std::numeric_limits<double>::infinity();

    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
        state.surface.w = w;
        const Sheet sheet(w, params, spec);

        // sampled argmax over the surface (lowest index on ties), then Newton
        const auto levels = surface_levels(state.surface, params, spec);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < levels.size(); ++k)
            if (levels[k] > levels[arg] + 1e-12 * std::max(1.0, std::abs(levels[arg]))) arg = k;
        const auto [c0, r0] = state.surface.parameter(static_cast<int>(arg) / cfg.n_r, static_cast<int>(arg) % cfg.n_r);
        SheetMax top = maximize_on_sheet(sheet, c0, std::max(r0, 1e-3 * caps.ray));
        if (have_warm) {
            const SheetMax warm = maximize_on_sheet(sheet, a, r);
            if (warm.value >= top.value - 1e-14 * std::abs(top.value)) top = warm;
        }
        a = top.a;
        r = top.r;
        have_warm = true;

        if (r * 1.0 < kCollapseNorm || top.value <= 0.0)
            throw NoNontrivialSolution("maximum over the deformed surface collapsed onto Y");
        if (std::abs(a) > caps.y || r > caps.ray) {
            while (std::abs(a) > caps.y) caps.y *= 2.0;
            while (r > caps.ray) caps.ray *= 2.0;
            if (!calibrate_caps(zsheet, caps, cfg.n_c, cfg.n_r))
                throw BoundaryNotNegative(caps.ray, caps.y, "surface maximizer left A and the caps cannot be enlarged");
            state.surface.ray_cap = caps.ray;
            state.surface.y_cap = caps.y;
        }

        const Spectrum u = a * e0 + r * w;
        const Spectrum res = gradient(u, params, spec, Metric::L2);
        const double gnorm = dual_norm(res, params);
        best_level = std::min(best_level, top.value);
        state.iterate = u;
        state.level = top.value;
        state.grad_norm = gnorm;
        state.history.push_back({sweep, best_level, gnorm, a, r});
        if (gnorm < cfg.ps_tol) {
            state.status = SolverStatus::Converged;
            break;
        }

        // X-gradient, tangent to the unit sphere of Z at w
        Spectrum g = drop_nyquist(project_zero_mean(scaled_by(res, dual_weights(grid, params))));
        g -= hs_inner(g, w, mult) * w;
        const double g2 = hs_inner(g, g, mult);
        tau = std::min(2.0 * tau, cfg.descent_step * 16.0);
        // a rotation of w by more than about half a radian is not a local step
        tau = std::min(tau, 0.5 / std::sqrt(g2));

        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            Spectrum trial = w - tau * g;
            trial *= 1.0 / std::sqrt(hs_inner(trial, trial, mult));
            const SheetMax next = maximize_on_sheet(Sheet(trial, params, spec), a, r);
            const bool armijo = next.value <= top.value - kArmijoSlope * tau * r * g2;
            bool floor_accept = false;
            if (!armijo && std::abs(next.value - top.value) <= 1e-13 * std::abs(top.value)) {
                // level differences are at rounding; fall back to the gradient norm
                const double gnext =
                    dual_norm(gradient(next.a * e0 + next.r * trial, params, spec, Metric::L2), params);
                floor_accept = gnext < gnorm;
            }
            if (armijo || floor_accept) {
                w = std::move(trial);
                a = next.a;
                r = next.r;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;  // stalled; status stays MaxIters
    }

    if (state.status == SolverStatus::Converged) {
        if (hs_norm(state.iterate, params) < kCollapseNorm || state.level <= 0.0)
            state.status = SolverStatus::NoNontrivialSolution;
        else if (state.level < state.rho - 1e-10 * std::max(1.0, std::abs(state.rho)))
            state.status = SolverStatus::MaxIters;
    }
    state.iterate = canonical_sign(state.iterate);
    return state;
}

void require_converged(const SolverState& state) {
    if (state.status == SolverStatus::Converged) return;
    std::ostringstream msg;
    msg << "linking search ended with status " << to_string(state.status) << " after "
        << state.history.size() << " sweeps (grad_norm " << state.grad_norm << ")";
    if (state.status == SolverStatus::NoNontrivialSolution) throw NoNontrivialSolution(msg.str());
    throw MaxItersReached(msg.str());
}

double residual_norm(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec) {
    return dual_norm(gradient(u, params, spec, Metric::L2), params);
}

namespace {

// Preconditioned MINRES for the symmetric (possibly indefinite or singular)
// system A x = b on Hermitian spectra with the L2 inner product.
template <typename Op, typename Prec>
Spectrum minres(const Op& apply, const Prec& precondition, const Spectrum& b, double rtol, int max_iters) {
    Spectrum x = Spectrum::zeros(b.grid());
    Spectrum r1 = b;
    Spectrum y = precondition(r1);
    const double beta1 = std::sqrt(std::max(inner(r1, y), 0.0));
    if (beta1 == 0.0) return x;
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    Spectrum w = Spectrum::zeros(b.grid());
    Spectrum w2 = Spectrum::zeros(b.grid());
    Spectrum r2 = r1;
    for (int it = 1; it <= max_iters; ++it) {
        const Spectrum v = (1.0 / beta) * y;
        y = apply(v);
        if (it >= 2) y -= (beta / oldb) * r1;
        const double alfa = inner(v, y);
        y -= (alfa / beta) * r2;
        r1 = r2;
        r2 = y;
        y = precondition(r2);
        oldb = beta;
        beta = std::sqrt(std::max(inner(r2, y), 0.0));
        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;
        const Spectrum w1 = w2;
        w2 = w;
        w = (1.0 / gamma) * (v - oldeps * w1 - delta * w2);
        x += phi * w;
        if (phibar <= rtol * beta1 || beta == 0.0) break;
    }
    return x;
}

double l2_residual(const Spectrum& u, const FracParams& params, const NonlinearitySpec& spec) {
    return l2_norm(gradient(u, params, spec, Metric::L2));
}

}  // namespace

RefineResult newton_refine(const Spectrum& u0, const FracParams& params, const NonlinearitySpec& spec, double tol,
                           int max_iters) {
    if (!(tol > 0.0)) throw ParameterError("refinement tolerance must be positive");
    const TorusGrid& grid = u0.grid();
    const auto shifted = shifted_multipliers(grid, params);
    const auto weights = dual_weights(grid, params);

    RefineResult out{drop_nyquist(u0), 0, 0.0, 0.0};
    double res = l2_residual(out.solution, params, spec);
    out.residual_l2 = res;
    if (res < tol) return out;

    double previous_level = evaluate(out.solution, params, spec).value;
    int increases = 0;
    for (int it = 1; it <= max_iters; ++it) {
        const Spectrum& u = out.solution;
        const Spectrum r = gradient(u, params, spec, Metric::L2);
        const Field d = nonlinear_derivative_padded(spec, u);
        auto apply = [&](const Spectrum& v) { return scaled_by(v, shifted) - multiply_padded(d, v); };
        auto precondition = [&](const Spectrum& v) { return scaled_by(v, weights); };
        const Spectrum step = minres(apply, precondition, -1.0 * r, 1e-13, 4 * static_cast<int>(grid.size()) + 50);

        double t = 1.0;
        Spectrum trial = u + step;
        double trial_res = l2_residual(trial, params, spec);
        for (int back = 0; back < 20 && trial_res >= res; ++back) {
            t *= 0.5;
            trial = u + t * step;
            trial_res = l2_residual(trial, params, spec);
        }
        increases = trial_res > res ? increases + 1 : 0;
        if (increases >= 5) throw DivergedRefinement("Newton residual increased in 5 consecutive steps");

        out.solution = drop_nyquist(trial);
        out.iterations = it;
        const double level = evaluate(out.solution, params, spec).value;
        out.level_change = std::abs(level - previous_level);
        previous_level = level;
        res = trial_res;
        out.residual_l2 = res;
        if (res < tol) return out;
    }
    throw DivergedRefinement("Newton refinement did not reach the tolerance in " + std::to_string(max_iters) +
                             " iterations (residual " + std::to_string(res) + ")");
}

}  // namespace pfrac
