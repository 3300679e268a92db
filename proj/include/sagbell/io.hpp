#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sagbell/bell.hpp"
#include "sagbell/fit.hpp"
#include "sagbell/simulate.hpp"
#include "sagbell/tomography.hpp"

namespace sagbell {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, int row_number)
      : std::runtime_error(message), row(row_number) {}
  int row;  // 1-based data row, 0 for header problems
};

/// CSV schema: omega_mean,omega_min,omega_max,integration_s followed by the
/// four channel columns (C12,C34,C23,C14 for pairs, D1..D4 for singles).
/// Values round-trip losslessly.
void write_sweep_csv(const SweepDataset& data, std::ostream& out);
void write_sweep_csv(const SweepDataset& data, const std::string& path);
SweepDataset read_sweep_csv(std::istream& in);
SweepDataset read_sweep_csv(const std::string& path);

/// Visibility series next to its omega grid: omega,visibility,sigma,defined.
void write_visibility_csv(const std::vector<double>& omegas,
                          const std::vector<VisibilityPoint>& series, std::ostream& out);

/// Analyzer and waveplate angles live in degrees inside JSON documents and in
/// radians everywhere else; the conversion happens in these functions. The
/// birefringence offset is a phase, quoted in radians on both sides.
Json to_json(const SimulationConfig& config);
SimulationConfig simulation_config_from_json(const Json& j);

Json to_json(const ChshCountGrid& grid);
ChshCountGrid chsh_grid_from_json(const Json& j);

Json to_json(const ChshSettings& settings);
ChshSettings chsh_settings_from_json(const Json& j);

Json to_json(const FringeFitReport& report);
Json to_json(const ChshReport& report);
Json to_json(const BoundedDensityMatrix& matrix);

/// Flat key,value renderings for --format csv.
std::string report_csv(const FringeFitReport& report);
std::string report_csv(const ChshReport& report);
std::string report_csv(const BoundedDensityMatrix& matrix);

void write_text_file(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace sagbell
