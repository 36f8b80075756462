#include "pfrac/continuation.hpp"

#include "pfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <typeinfo>

namespace pfrac {
namespace {

constexpr int kOversample = 4;
constexpr double kTrivialNorm = 1e-6;

Field oversampled(const Spectrum& u) { return inverse_transform(resample(drop_nyquist(u), kOversample * u.grid().points())); }

// log |u|_q - log |u|_{H^s_0} and its gradient in the homogeneous H^s metric.
struct Quotient {
    const std::vector<double>& hom;
    double q;

    double log_value(const Spectrum& v) const {
        double h = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) h += hom[i] * std::norm(v[i]);
        return std::log(lq_norm(oversampled(v), q)) - 0.5 * std::log(h);
    }

    // Tangent to the unit sphere when |v|_{H^s_0} = 1.
    Spectrum ascent(const Spectrum& v) const {
        const Field u = oversampled(v);
        std::vector<double> g(u.size());
        double phi = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double a = std::abs(u[j]);
            g[j] = std::pow(a, q - 2.0) * u[j];
            phi += g[j] * u[j];
        }
        phi *= u.grid().cell_volume();
        const Spectrum gh =
            drop_nyquist(project_zero_mean(resample(forward_transform(Field(u.grid(), std::move(g))), v.grid().points())));
        std::vector<Complex> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = hom[i] > 0.0 ? gh[i] / (phi * hom[i]) - v[i] : Complex(0.0);
        return drop_nyquist(Spectrum(v.grid(), std::move(out)));
    }
};

double hom_norm(const Spectrum& v, const std::vector<double>& hom) {
    double h = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) h += hom[i] * std::norm(v[i]);
    return std::sqrt(h);
}

std::pair<Spectrum, double> ascend(Spectrum v, const Quotient& Q) {
    v *= 1.0 / hom_norm(v, Q.hom);
    double value = Q.log_value(v);
    double tau = 1.0;
    for (int it = 0; it < 400; ++it) {
        const Spectrum g = Q.ascent(v);
        const double g2 = std::pow(hom_norm(g, Q.hom), 2);
        if (g2 < 1e-24) break;
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            Spectrum trial = v + tau * g;
            trial *= 1.0 / hom_norm(trial, Q.hom);
            const double next = Q.log_value(trial);
            if (next >= value + 1e-4 * tau * g2) {
                v = std::move(trial);
                value = next;
                accepted = true;
                tau = std::min(2.0 * tau, 16.0);
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
    }
    return {v, value};
}

std::string error_name(const SolverError& e) {
    if (dynamic_cast<const NoPositiveRidge*>(&e)) return "NoPositiveRidge";
    if (dynamic_cast<const BoundaryNotNegative*>(&e)) return "BoundaryNotNegative";
    if (dynamic_cast<const NoNontrivialSolution*>(&e)) return "NoNontrivialSolution";
    if (dynamic_cast<const MaxItersReached*>(&e)) return "MaxIters";
    return "SolverError";
}

// Distance modulo the sign symmetry of odd nonlinearities.
double branch_distance(const Spectrum& a, const Spectrum& b, const FracParams& unit) {
    return std::min(hs_norm(a - b, unit), hs_norm(a + b, unit));
}

double integral_fu(const NonlinearitySpec& spec, const Spectrum& u) {
    const int points = spec.padded_points(u.grid().points());
    const Field f = evaluate_padded(spec, u, points, false);
    const Field v = inverse_transform(resample(drop_nyquist(u), points));
    double sum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) sum += f[j] * v[j];
    return sum * v.grid().cell_volume();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double sobolev_exponent(int dim, const FracParams& params, const NonlinearitySpec& spec) {
    const double crit = params.critical_exponent(dim);
    return std::isfinite(crit) ? crit : spec.p() + 1.0;
}

SobolevEstimate estimate_sobolev_constant(const TorusGrid& grid, const FracParams& params, double q,
                                          std::uint64_t seed, int starts, const std::optional<Spectrum>& warm_start) {
    if (!(q >= 2.0) || !std::isfinite(q)) throw BadExponent("Sobolev quotient needs finite q >= 2");
    if (grid.points() < 4) throw ParameterError("Sobolev estimate needs at least 4 points per axis");
    const auto hom = bessel_multipliers(grid, params.with_mass(0.0));
    const Quotient Q{hom, q};

    std::vector<Spectrum> candidates;
    candidates.push_back(Spectrum::mode(grid, {1, 0, 0}, 1.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int i = 0; i < starts; ++i) {
        std::vector<Complex> c(grid.size());
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const std::size_t j = grid.conjugate_index(k);
            if (j < k || grid.on_nyquist(k)) continue;
            const double sd = 1.0 / std::sqrt(hom[k]);
            const Complex v(normal(rng) * sd, j == k ? 0.0 : normal(rng) * sd);
            c[k] = v;
            c[j] = std::conj(v);
        }
        candidates.emplace_back(grid, std::move(c));
    }
    if (warm_start) {
        const Spectrum w = drop_nyquist(project_zero_mean(resample(*warm_start, grid.points())));
        if (hom_norm(w, hom) > 0.0) candidates.push_back(w);
    }

    SobolevEstimate best{Spectrum::zeros(grid)};
    best.q = q;
    double best_log = -std::numeric_limits<double>::infinity();
    for (const Spectrum& start : candidates) {
        auto [v, value] = ascend(start, Q);
        if (value > best_log) {
            best_log = value;
            best.maximizer = std::move(v);
        }
    }
    best.C_sharp = std::exp(best_log);
    best.m0 = 1.0 / (2.0 * best.C_sharp * best.C_sharp);
    return best;
}

SweepResult sweep_m(const TorusGrid& grid, const std::vector<double>& m_list, double s,
                    const NonlinearitySpec& spec, const LinkingConfig& cfg, double m0) {
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (!(m_list[i] > 0.0) || !(m_list[i] < m0))
            throw ParameterError("sweep mass m=" + std::to_string(m_list[i]) + " must lie in (0, m0=" +
                                 std::to_string(m0) + ")");
        if (i > 0 && !(m_list[i] < m_list[i - 1])) throw ParameterError("sweep masses must be strictly decreasing");
    }

    SweepResult out;
    out.s = s;
    std::optional<Spectrum> warm;
    std::optional<LinkingSurface> last_set;
    for (double m : m_list) {
        const FracParams params(s, m);
        ContinuationRecord rec{Spectrum::zeros(grid)};
        rec.m = m;
        try {
            const Spectrum z = warm && hs_norm(project_zero_mean(*warm), params) > 0.0
                                   ? project_zero_mean(*warm)
                                   : pick_z_direction(grid, params);
            const SolverState state = minimax_search(grid, params, spec, cfg, z);
            rec.status = to_string(state.status);
            rec.alpha = state.level;
            rec.rho = state.rho;
            rec.delta_hat = state.delta_hat;
            rec.solution = state.iterate;
            rec.hs_norm_T = hs_norm(state.iterate, params.with_mass(1.0));
            rec.l2_norm = l2_norm(state.iterate);
            rec.residual = residual_norm(state.iterate, params, spec);
            if (rec.converged()) {
                warm = state.iterate;
                last_set = state.surface;
            }
        } catch (const SolverError& e) {
            rec.status = error_name(e);
            rec.detail = e.what();
        }
        out.records.push_back(std::move(rec));
    }

    double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
    out.lambda_hat = std::numeric_limits<double>::infinity();
    const ContinuationRecord* first = nullptr;
    const ContinuationRecord* last = nullptr;
    for (const auto& r : out.records) {
        if (!r.converged()) continue;
        if (!first) first = &r;
        last = &r;
        out.lambda_hat = std::min(out.lambda_hat, r.rho);
        out.delta_hat = std::max(out.delta_hat, r.delta_hat);
        out.max_hs_norm = std::max(out.max_hs_norm, r.hs_norm_T);
        out.max_l2_norm = std::max(out.max_l2_norm, r.l2_norm);
        amin = std::min(amin, r.alpha);
        amax = std::max(amax, r.alpha);
    }
    if (!first) {
        out.lambda_hat = 0.0;
        return out;
    }
    // I_m grows as m decreases, so a bound uniform in m must also hold at
    // m = 0; evaluate the last linking set there
    const LinkingSurface& A = *last_set;
    out.delta_hat = std::max(out.delta_hat, linking_set_max(A.z, A.ray_cap, A.y_cap, A.n_c, A.n_r,
                                                            FracParams(s, 0.0), spec));
    out.alpha_spread = amax / amin;
    out.envelope_holds = amin > 0.0 && amin >= out.lambda_hat - 1e-10 && amax <= out.delta_hat + 1e-10;
    out.bounded = last->hs_norm_T < 10.0 * first->hs_norm_T;
    return out;
}

LimitResult extract_limit(const SweepResult& sweep, const NonlinearitySpec& spec, double tol) {
    if (!(tol > 0.0)) throw ParameterError("limit tolerance must be positive");
    std::vector<const ContinuationRecord*> good;
    for (const auto& r : sweep.records)
        if (r.converged()) good.push_back(&r);
    if (good.size() < 2) throw ParameterError("limit extraction needs at least two converged sweep records");

    const TorusGrid& grid = good.back()->solution.grid();
    const FracParams zero_mass(sweep.s, 0.0);
    const FracParams unit(sweep.s, 1.0);
    // the H^{-s} weights at m = 0 are at most max(1, w^{-2s}), so this L2
    // target implies the dual residual target
    const double l2_tol = 0.5 * tol * std::min(1.0, std::pow(grid.omega(), sweep.s));
    const RefineResult refined = newton_refine(good.back()->solution, zero_mass, spec, l2_tol);

    LimitResult out{refined.solution};
    out.hs_norm = hs_norm(out.solution, unit);
    if (out.hs_norm < kTrivialNorm) throw LimitCollapsed("m = 0 refinement collapsed to the trivial solution");
    out.residual = residual_norm(out.solution, zero_mass, spec);
    if (!(out.residual < tol))
        throw DivergedRefinement("m = 0 residual " + std::to_string(out.residual) + " above tolerance");
    out.level = evaluate(out.solution, zero_mass, spec).value;
    out.nontriviality = integral_fu(spec, out.solution);
    if (!(out.nontriviality > 0.0) || out.nontriviality < 2.0 * sweep.lambda_hat - tol)
        throw LimitCollapsed("int f(x,u) u = " + std::to_string(out.nontriviality) + " below 2 lambda_hat = " +
                             std::to_string(2.0 * sweep.lambda_hat));
    out.in_envelope = out.level >= sweep.lambda_hat - tol && out.level <= sweep.delta_hat + tol;

    // branch steps should follow the trend in m^{2s}, the leading order of
    // the multiplier change
    std::vector<double> t;
    std::vector<const Spectrum*> u;
    for (const auto* r : good) {
        t.push_back(std::pow(r->m, 2.0 * sweep.s));
        u.push_back(&r->solution);
    }
    t.push_back(0.0);
    u.push_back(&out.solution);
    const double floor = 1e-8 * (1.0 + out.hs_norm);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double prev = branch_distance(*u[i - 1], *u[i], unit);
        const double step = branch_distance(*u[i], *u[i + 1], unit);
        const double trend = prev * (t[i] - t[i + 1]) / (t[i - 1] - t[i]);
        if (step > 10.0 * trend + floor)
            throw NotCauchy("branch step " + std::to_string(step) + " exceeds 10x the trend " + std::to_string(trend));
    }
    return out;
}

std::vector<double> bootstrap_ladder(int dim, double s, double q_max) {
    std::vector<double> out;
    const double gap = dim - 2.0 * s;
    if (q_max < 2.0) return out;
    out.push_back(2.0);
    if (!(gap > 0.0)) return out;
    const double ratio = dim / gap;
    for (double q = 2.0 * ratio; q <= q_max * (1.0 + 1e-12) && out.size() < 64; q *= ratio) out.push_back(q);
    return out;
}

BootstrapReport bootstrap_diagnostic(const Spectrum& u, const std::vector<double>& q_list, double s) {
    std::vector<double> qs = q_list;
    std::sort(qs.begin(), qs.end());
    for (double q : qs)
        if (!(q >= 2.0) || !std::isfinite(q)) throw BadExponent("bootstrap exponents must be finite and >= 2");
    const std::vector<double> ladder = qs.empty() ? std::vector<double>{} : bootstrap_ladder(u.grid().dim(), s, qs.back());
    const Field fine = oversampled(u);

    BootstrapReport out;
    for (double q : qs) {
        BootstrapRow row{q, lq_norm(fine, q), false};
        for (double l : ladder) row.on_ladder = row.on_ladder || std::abs(l - q) <= 1e-9 * q;
        out.rows.push_back(row);
    }
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i - 1].norm > 0.0) out.growth = std::max(out.growth, out.rows[i].norm / out.rows[i - 1].norm);
    return out;
}

HolderProxy holder_proxy(const Spectrum& u) {
    const TorusGrid& grid = u.grid();
    const int n = grid.points();
    double total = 0.0, top = 0.0;
    int kmax = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Wavevector k = grid.wavenumber(i);
        int km = 0;
        for (int d = 0; d < grid.dim(); ++d) km = std::max(km, std::abs(k[d]));
        total += std::norm(u[i]);
        if (4 * km > n) top += std::norm(u[i]);
        kmax = std::max(kmax, km);
    }
    if (!(total > 0.0)) throw DomainError("Hölder proxy of the zero field");
    if (top > 0.1 * total)
        throw InsufficientDecay("top half of the band carries " + std::to_string(top / total) + " of the energy");

    HolderProxy out;

    // spectral decay on shells of the top half band
    std::vector<double> shell(kmax + 1, 0.0);
    std::vector<int> count(kmax + 1, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (grid.on_nyquist(i)) continue;
        const int r = static_cast<int>(std::lround(std::sqrt(grid.wavenumber_sq(i))));
        if (r <= kmax) {
            shell[r] += std::norm(u[i]);
            ++count[r];
        }
    }
    std::vector<double> lx, ly;
    for (int r = std::max(1, n / 4 + 1); r <= kmax; ++r) {
        if (count[r] == 0) continue;
        const double amp = std::sqrt(shell[r] / count[r]);
        if (amp <= 1e-14 * std::sqrt(total)) continue;
        lx.push_back(std::log(r));
        ly.push_back(std::log(amp));
    }
    out.spectral_alpha =
        lx.size() >= 2 ? -fit_slope(lx, ly) - 0.5 * grid.dim() : std::numeric_limits<double>::quiet_NaN();

    // sup-modulus of continuity at dyadic scales above the resolution
    const double T = grid.period();
    std::vector<double> scales;
    for (double h = T / 16.0; h >= 4.0 * T / n || scales.size() < 2; h *= 0.5) scales.push_back(h);
    const Spectrum band = drop_nyquist(u);
    const Field base = oversampled(band);
    std::vector<double> hx, hy;
    for (double h : scales) {
        double modulus = 0.0;
        for (int d = 0; d < grid.dim(); ++d) {
            std::vector<Complex> shifted(u.size());
            for (std::size_t i = 0; i < u.size(); ++i)
                shifted[i] = band[i] * std::polar(1.0, grid.omega() * grid.wavenumber(i)[d] * h);
            const Field moved = oversampled(Spectrum(grid, std::move(shifted)));
            for (std::size_t j = 0; j < base.size(); ++j) modulus = std::max(modulus, std::abs(moved[j] - base[j]));
        }
        if (modulus > 0.0) {
            hx.push_back(std::log(h));
            hy.push_back(std::log(modulus));
        }
    }
    const double alpha = hx.size() >= 2 ? fit_slope(hx, hy) : 1.0;
    out.alpha = std::clamp(alpha, 0.001, 0.999);
    return out;
}

}  // namespace pfrac
