#pragma once

// Persistence: JSON for spectra, fields, cylinder functions and energy
// reports; CSV for solver traces and mass sweeps. Every writer has a
// matching reader, and malformed input raises ParseError.

#include "pfrac/continuation.hpp"
#include "pfrac/energy.hpp"
#include "pfrac/extension.hpp"
#include "pfrac/linking.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace pfrac::io {

using json = nlohmann::json;

json grid_to_json(const TorusGrid& grid);
TorusGrid grid_from_json(const json& j);

/// {grid, kind: "spectrum", data: [[re, im], ...]} in storage order.
json to_json(const Spectrum& u);
/// {grid, kind: "field", data: [v, ...]} in storage order.
json to_json(const Field& u);
Spectrum spectrum_from_json(const json& j);
Field field_from_json(const json& j);
/// Accepts either kind; fields are transformed.
Spectrum any_to_spectrum(const json& j);

json to_json(const CylinderFunction& v);
CylinderFunction cylinder_from_json(const json& j);

json to_json(const EnergyReport& r);
EnergyReport energy_report_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed, shortest round-trip decimal representation of doubles.
void write_json_file(const std::filesystem::path& path, const json& j);

/// Columns sweep, level, grad_norm, c, r; numbers printed with %.17g.
std::string trace_csv(const std::vector<SweepRecord>& history);
std::vector<SweepRecord> parse_trace_csv(const std::string& text);

/// Columns m, alpha, hs_norm_T, l2_norm, residual, status.
std::string sweep_csv(const std::vector<ContinuationRecord>& records);

struct SweepRow {
    double m = 0.0;
    double alpha = 0.0;
    double hs_norm_T = 0.0;
    double l2_norm = 0.0;
    double residual = 0.0;
    std::string status{};
};
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "%.17g" formatting.
std::string format_double(double v);

}  // namespace pfrac::io
