#include "pfrac/io.hpp"

#include "pfrac/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pfrac::io {
namespace {

template <typename T>
T field_as(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad value for '") + key + "': " + e.what());
    }
}

void expect_kind(const json& j, const char* kind) {
    const auto k = field_as<std::string>(j, "kind");
    if (k != kind) throw ParseError("expected kind '" + std::string(kind) + "', got '" + k + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& cell) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw ParseError("trailing characters in number '" + cell + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("not a number: '" + cell + "'");
    }
}

// Rows of a CSV with a fixed header; blank trailing lines are ignored.
std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header) throw ParseError("CSV header must be '" + header + "'");
    const std::size_t columns = split(header, ',').size();
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != columns) throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells");
        rows.push_back(std::move(cells));
    }
    return rows;
}

json rule_to_json(const YRule& r) { return {{"nodes", r.nodes}, {"weights", r.weights}}; }

YRule rule_from_json(const json& j) {
    YRule r{field_as<std::vector<double>>(j, "nodes"), field_as<std::vector<double>>(j, "weights")};
    if (r.nodes.size() != r.weights.size()) throw ParseError("y rule nodes and weights differ in length");
    return r;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json grid_to_json(const TorusGrid& grid) {
    return {{"N", grid.dim()}, {"T", grid.period()}, {"n", grid.points()}};
}

TorusGrid grid_from_json(const json& j) {
    try {
        return TorusGrid(field_as<int>(j, "N"), field_as<double>(j, "T"), field_as<int>(j, "n"));
    } catch (const ParameterError& e) {
        throw ParseError(std::string("invalid grid: ") + e.what());
    }
}

json to_json(const Spectrum& u) {
    json data = json::array();
    for (const Complex& c : u.coeffs()) data.push_back({c.real(), c.imag()});
    return {{"grid", grid_to_json(u.grid())}, {"kind", "spectrum"}, {"data", std::move(data)}};
}

json to_json(const Field& u) {
    json data = json::array();
    for (double v : u.values()) data.push_back(v);
    return {{"grid", grid_to_json(u.grid())}, {"kind", "field"}, {"data", std::move(data)}};
}

Spectrum spectrum_from_json(const json& j) {
    expect_kind(j, "spectrum");
    const TorusGrid grid = grid_from_json(field_as<json>(j, "grid"));
    const auto pairs = field_as<std::vector<std::vector<double>>>(j, "data");
    if (pairs.size() != grid.size()) throw ParseError("spectrum data length does not match the grid");
    std::vector<Complex> c;
    c.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.size() != 2) throw ParseError("complex entries must be [re, im] pairs");
        c.emplace_back(p[0], p[1]);
    }
    return Spectrum(grid, std::move(c));
}

Field field_from_json(const json& j) {
    expect_kind(j, "field");
    const TorusGrid grid = grid_from_json(field_as<json>(j, "grid"));
    auto values = field_as<std::vector<double>>(j, "data");
    if (values.size() != grid.size()) throw ParseError("field data length does not match the grid");
    return Field(grid, std::move(values));
}

Spectrum any_to_spectrum(const json& j) {
    const auto kind = field_as<std::string>(j, "kind");
    if (kind == "spectrum") return spectrum_from_json(j);
    if (kind == "field") return forward_transform(field_from_json(j));
    throw ParseError("unknown kind '" + kind + "'");
}

json to_json(const CylinderFunction& v) {
    json out = {{"grid", grid_to_json(v.grid)},
                {"kind", "cylinder"},
                {"s", v.s},
                {"y_nodes", v.value_rule.nodes},
                {"weights", v.value_rule.weights},
                {"values", v.values},
                {"slope_rule", rule_to_json(v.slope_rule)},
                {"dy_values", v.dy_values}};
    if (v.trace) out["trace"] = *v.trace;
    return out;
}

CylinderFunction cylinder_from_json(const json& j) {
    expect_kind(j, "cylinder");
    CylinderFunction v{grid_from_json(field_as<json>(j, "grid")),
                       field_as<double>(j, "s"),
                       YRule{field_as<std::vector<double>>(j, "y_nodes"), field_as<std::vector<double>>(j, "weights")},
                       field_as<std::vector<double>>(j, "values"),
                       rule_from_json(field_as<json>(j, "slope_rule")),
                       field_as<std::vector<double>>(j, "dy_values"),
                       std::nullopt};
    if (j.contains("trace")) v.trace = field_as<std::vector<double>>(j, "trace");
    const std::size_t m = v.grid.size();
    if (v.value_rule.nodes.size() != v.value_rule.weights.size() ||
        v.values.size() != v.value_rule.nodes.size() * m || v.dy_values.size() != v.slope_rule.nodes.size() * m ||
        (v.trace && v.trace->size() != m))
        throw ParseError("cylinder function arrays do not match the grid and y rules");
    return v;
}

json to_json(const EnergyReport& r) {
    return {{"value", r.value}, {"quad", r.quad}, {"nl", r.nl}, {"grad_norm", r.grad_norm}};
}

EnergyReport energy_report_from_json(const json& j) {
    return {field_as<double>(j, "value"), field_as<double>(j, "quad"), field_as<double>(j, "nl"),
            field_as<double>(j, "grad_norm")};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string trace_csv(const std::vector<SweepRecord>& history) {
    std::string out = "sweep,level,grad_norm,c,r\n";
    for (const auto& h : history) {
        out += std::to_string(h.sweep) + ',' + format_double(h.level) + ',' + format_double(h.grad_norm) + ',' +
               format_double(h.arg_c) + ',' + format_double(h.arg_r) + '\n';
    }
    return out;
}

std::vector<SweepRecord> parse_trace_csv(const std::string& text) {
    std::vector<SweepRecord> out;
    for (const auto& row : csv_rows(text, "sweep,level,grad_norm,c,r")) {
        out.push_back({static_cast<int>(parse_number(row[0])), parse_number(row[1]), parse_number(row[2]),
                       parse_number(row[3]), parse_number(row[4])});
    }
    return out;
}

std::string sweep_csv(const std::vector<ContinuationRecord>& records) {
    std::string out = "m,alpha,hs_norm_T,l2_norm,residual,status\n";
    for (const auto& r : records) {
        out += format_double(r.m) + ',' + format_double(r.alpha) + ',' + format_double(r.hs_norm_T) + ',' +
               format_double(r.l2_norm) + ',' + format_double(r.residual) + ',' + r.status + '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> out;
    for (const auto& row : csv_rows(text, "m,alpha,hs_norm_T,l2_norm,residual,status")) {
        out.push_back({parse_number(row[0]), parse_number(row[1]), parse_number(row[2]), parse_number(row[3]),
                       parse_number(row[4]), row[5]});
    }
    return out;
}

}  // namespace pfrac::io
