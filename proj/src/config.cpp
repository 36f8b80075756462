#include "pfrac/config.hpp"

#include "pfrac/continuation.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pfrac {
namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError(path.empty() ? "(root)" : path, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ValidationError(join(path, key), "unknown key");
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
    return v;
}

long long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
    return j.get<long long>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const json* j = find(obj, key);
    if (!j) throw ValidationError(join(path, key), "required");
    return *j;
}

// a(x) or g(x): a file reference or {mean, cos: [{k, amplitude}]}.
Field coefficient_field(const json& j, const std::string& path, const TorusGrid& grid, const ParseOptions& opt) {
    if (j.is_string()) {
        std::filesystem::path file = j.get<std::string>();
        if (file.is_relative()) file = opt.base_dir / file;
        Spectrum spec = [&] {
            try {
                return io::any_to_spectrum(io::read_json_file(file));
            } catch (const ParseError& e) {
                throw ValidationError(path, e.what());
            }
        }();
        if (!(spec.grid() == grid)) throw ValidationError(path, "field grid differs from the run grid");
        return inverse_transform(spec);
    }
    reject_unknown(j, path, {"mean", "cos"});
    const double mean = find(j, "mean") ? number(j["mean"], join(path, "mean")) : 0.0;
    struct Term {
        Wavevector k;
        double amplitude;
    };
    std::vector<Term> terms;
    if (const json* cos = find(j, "cos")) {
        if (!cos->is_array()) throw ValidationError(join(path, "cos"), "expected an array");
        for (std::size_t i = 0; i < cos->size(); ++i) {
            const std::string p = join(path, "cos") + "[" + std::to_string(i) + "]";
            const json& t = (*cos)[i];
            reject_unknown(t, p, {"k", "amplitude"});
            Term term{{0, 0, 0}, number(require(t, p, "amplitude"), join(p, "amplitude"))};
            const json& k = require(t, p, "k");
            if (k.is_array()) {
                if (k.size() != static_cast<std::size_t>(grid.dim()))
                    throw ValidationError(join(p, "k"), "needs one entry per dimension");
                for (int d = 0; d < grid.dim(); ++d)
                    term.k[d] = static_cast<int>(integer(k[d], join(p, "k") + "[" + std::to_string(d) + "]"));
            } else {
                term.k[0] = static_cast<int>(integer(k, join(p, "k")));
            }
            terms.push_back(term);
        }
    }
    const double w = grid.omega();
    return Field::from_function(grid, [&](const Point& x) {
        double v = mean;
        for (const Term& t : terms) {
            double phase = 0.0;
            for (int d = 0; d < grid.dim(); ++d) phase += t.k[d] * x[d];
            v += t.amplitude * std::cos(w * phase);
        }
        return v;
    });
}

NonlinearitySpec parse_nonlinearity(const json& j, const TorusGrid& grid, const FracParams& params,
                                    const ParseOptions& opt) {
    const std::string path = "nonlinearity";
    reject_unknown(j, path, {"kind", "p", "mu", "r0", "a", "g"});
    const json& kind_json = require(j, path, "kind");
    if (!kind_json.is_string()) throw ValidationError("nonlinearity.kind", "expected a string");
    const std::string kind = kind_json.get<std::string>();

    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* key : keys)
            if (find(j, key)) throw ValidationError(join(path, key), "not used by kind '" + kind + "'");
    };

    if (kind == "zero") {
        forbid({"p", "mu", "r0", "a", "g"});
        return NonlinearitySpec::zero();
    }
    if (kind == "forcing") {
        forbid({"p", "mu", "r0", "a"});
        return NonlinearitySpec::forcing(coefficient_field(require(j, path, "g"), "nonlinearity.g", grid, opt));
    }
    if (kind != "pure_power" && kind != "modulated_power")
        throw ValidationError("nonlinearity.kind",
                              "unknown kind '" + kind + "' (pure_power, modulated_power, zero, forcing)");
    forbid({"g"});
    const double p = number(require(j, path, "p"), "nonlinearity.p");
    std::optional<double> mu;
    if (const json* m = find(j, "mu")) mu = number(*m, "nonlinearity.mu");
    const double r0 = find(j, "r0") ? number(j["r0"], "nonlinearity.r0") : 1.0;
    try {
        if (kind == "pure_power") {
            forbid({"a"});
            return NonlinearitySpec::pure_power(p, grid.dim(), params, mu, r0);
        }
        Field a = coefficient_field(require(j, path, "a"), "nonlinearity.a", grid, opt);
        const auto lowest = std::min_element(a.values().begin(), a.values().end());
        if (!(*lowest > 0.0))
            throw ValidationError("nonlinearity.a", "coefficient must be strictly positive, (f6) fails with min a = " +
                                                        io::format_double(*lowest));
        return NonlinearitySpec::modulated_power(std::move(a), p, params, mu, r0);
    } catch (const ParameterError& e) {
        const std::string msg = e.what();
        std::string where = "nonlinearity";
        if (msg.find("(f4)") != std::string::npos) where = "nonlinearity.p";
        else if (msg.find("r0") != std::string::npos) where = "nonlinearity.r0";
        else if (msg.find("mu") != std::string::npos) where = "nonlinearity.mu";
        throw ValidationError(where, msg);
    }
}

LinkingConfig parse_solver(const json& j) {
    const std::string path = "solver";
    reject_unknown(j, path,
                   {"ray_cap", "y_cap", "n_c", "n_r", "descent_step", "ps_tol", "max_iters", "probe_radii",
                    "random_directions"});
    LinkingConfig cfg;
    if (const json* v = find(j, "ray_cap")) cfg.ray_cap = number(*v, "solver.ray_cap");
    if (const json* v = find(j, "y_cap")) cfg.y_cap = number(*v, "solver.y_cap");
    if (const json* v = find(j, "n_c")) cfg.n_c = static_cast<int>(integer(*v, "solver.n_c"));
    if (const json* v = find(j, "n_r")) cfg.n_r = static_cast<int>(integer(*v, "solver.n_r"));
    if (const json* v = find(j, "descent_step")) cfg.descent_step = number(*v, "solver.descent_step");
    if (const json* v = find(j, "ps_tol")) cfg.ps_tol = number(*v, "solver.ps_tol");
    if (const json* v = find(j, "max_iters")) cfg.max_iters = static_cast<int>(integer(*v, "solver.max_iters"));
    if (const json* v = find(j, "probe_radii")) cfg.probe_radii = number_list(*v, "solver.probe_radii");
    if (const json* v = find(j, "random_directions"))
        cfg.random_directions = static_cast<int>(integer(*v, "solver.random_directions"));
    try {
        cfg.validate();
    } catch (const ParameterError& e) {
        throw ValidationError(path, e.what());
    }
    if (cfg.probe_radii.empty()) throw ValidationError("solver.probe_radii", "must not be empty");
    for (std::size_t i = 0; i < cfg.probe_radii.size(); ++i)
        if (!(cfg.probe_radii[i] > 0.0) || (i > 0 && !(cfg.probe_radii[i] > cfg.probe_radii[i - 1])))
            throw ValidationError("solver.probe_radii", "must be positive and increasing");
    return cfg;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Verify: return "verify";
        case RunMode::Solve: return "solve";
        case RunMode::Sweep: return "sweep";
        case RunMode::Diagnose: return "diagnose";
    }
    return "unknown";
}

RunMode parse_mode(const std::string& name) {
    for (RunMode m : {RunMode::Verify, RunMode::Solve, RunMode::Sweep, RunMode::Diagnose})
        if (to_string(m) == name) return m;
    throw ValidationError("mode", "unknown mode '" + name + "' (verify, solve, sweep, diagnose)");
}

RunConfig parse_config(const std::string& text, const ParseOptions& options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed configuration: ") + e.what());
    }
    reject_unknown(doc, "",
                   {"grid", "frac", "nonlinearity", "solver", "mode", "m_list", "output_dir", "seed", "limit_tol",
                    "diagnose", "extension_nodes"});

    RunConfig cfg;

    const json& g = require(doc, "", "grid");
    reject_unknown(g, "grid", {"N", "T", "n"});
    const long long N = integer(require(g, "grid", "N"), "grid.N");
    const double T = number(require(g, "grid", "T"), "grid.T");
    const long long n = integer(require(g, "grid", "n"), "grid.n");
    if (N < 1 || N > 3) throw ValidationError("grid.N", "must be 1, 2 or 3");
    if (!(T > 0.0)) throw ValidationError("grid.T", "must be positive");
    if (n < 4 || n % 2 != 0) throw ValidationError("grid.n", "must be even and >= 4");
    cfg.grid = TorusGrid(static_cast<int>(N), T, static_cast<int>(n));

    const json& f = require(doc, "", "frac");
    reject_unknown(f, "frac", {"s", "m"});
    const double s = number(require(f, "frac", "s"), "frac.s");
    const double m = number(require(f, "frac", "m"), "frac.m");
    if (!(s > 0.0 && s < 1.0)) throw ValidationError("frac.s", "must lie in (0, 1)");
    if (!(m >= 0.0)) throw ValidationError("frac.m", "must be >= 0");
    cfg.params = FracParams(s, m);
    if (N < 2.0 * s) throw ValidationError("frac.s", "dimension N must satisfy N >= 2s");

    cfg.spec = parse_nonlinearity(require(doc, "", "nonlinearity"), cfg.grid, cfg.params, options);
    cfg.solver = find(doc, "solver") ? parse_solver(doc["solver"]) : LinkingConfig{};

    if (options.mode) {
        cfg.mode = *options.mode;
    } else {
        const json& mode = require(doc, "", "mode");
        if (!mode.is_string()) throw ValidationError("mode", "expected a string");
        cfg.mode = parse_mode(mode.get<std::string>());
    }

    if (const json* v = find(doc, "seed")) {
        const long long seed = integer(*v, "seed");
        if (seed < 0) throw ValidationError("seed", "must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (options.seed) cfg.seed = *options.seed;
    cfg.solver.seed = cfg.seed;

    if (const json* v = find(doc, "output_dir")) {
        if (!v->is_string()) throw ValidationError("output_dir", "expected a string");
        cfg.output_dir = v->get<std::string>();
    }
    if (const json* v = find(doc, "limit_tol")) {
        cfg.limit_tol = number(*v, "limit_tol");
        if (!(cfg.limit_tol > 0.0)) throw ValidationError("limit_tol", "must be positive");
    }
    if (const json* v = find(doc, "extension_nodes")) {
        cfg.extension_nodes = static_cast<int>(integer(*v, "extension_nodes"));
        if (cfg.extension_nodes < 4) throw ValidationError("extension_nodes", "must be >= 4");
    }
    if (const json* v = find(doc, "m_list")) cfg.m_list = number_list(*v, "m_list");
    if (const json* d = find(doc, "diagnose")) {
        reject_unknown(*d, "diagnose", {"solution", "q_list"});
        if (const json* v = find(*d, "solution")) {
            if (!v->is_string()) throw ValidationError("diagnose.solution", "expected a string");
            cfg.solution_path = v->get<std::string>();
        }
        if (const json* v = find(*d, "q_list")) cfg.q_list = number_list(*v, "diagnose.q_list");
        for (std::size_t i = 0; i < cfg.q_list.size(); ++i)
            if (!(cfg.q_list[i] >= 2.0))
                throw ValidationError("diagnose.q_list[" + std::to_string(i) + "]", "exponents must be >= 2");
    }
    if (cfg.solution_path.empty()) cfg.solution_path = cfg.output_dir / "solution.json";
    if (cfg.solution_path.is_relative() && !options.base_dir.empty() && find(doc, "diagnose") &&
        find(doc["diagnose"], "solution"))
        cfg.solution_path = options.base_dir / cfg.solution_path;

    if (cfg.mode == RunMode::Sweep) {
        if (cfg.m_list.empty()) throw ValidationError("m_list", "sweep mode needs a nonempty m_list");
        for (std::size_t i = 0; i < cfg.m_list.size(); ++i) {
            const std::string p = "m_list[" + std::to_string(i) + "]";
            if (!(cfg.m_list[i] > 0.0)) throw ValidationError(p, "masses must be positive");
            if (i > 0 && !(cfg.m_list[i] < cfg.m_list[i - 1])) throw ValidationError(p, "masses must decrease");
        }
        const SobolevEstimate est =
            estimate_sobolev_constant(cfg.grid, cfg.params, sobolev_exponent(cfg.grid.dim(), cfg.params, cfg.spec),
                                      cfg.seed);
        cfg.m0 = est.m0;
        for (std::size_t i = 0; i < cfg.m_list.size(); ++i)
            if (!(cfg.m_list[i] < est.m0))
                throw ValidationError("m_list[" + std::to_string(i) + "]",
                                      "m = " + io::format_double(cfg.m_list[i]) + " is not below m0 = " +
                                          io::format_double(est.m0));
    }
    return cfg;
}

}  // namespace pfrac
