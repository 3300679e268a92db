#include "sagbell/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sagbell {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& token, int row, const std::string& column) {
  double value{};
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end)
    throw ParseError("row " + std::to_string(row) + ": cannot parse " + column + " value '" +
                         token + "'",
                     row);
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::array<double, 4> json_to_array4(const Json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 4)
    throw std::runtime_error("'" + key + "' must be an array of 4 numbers");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

void write_sweep_csv(const SweepDataset& data, std::ostream& out) {
  const auto& names = data.channel_names();
  out << "omega_mean,omega_min,omega_max,integration_s," << names[0] << ',' << names[1] << ','
      << names[2] << ',' << names[3] << '\n';
  for (const auto& row : data.rows) {
    out << format_double(row.omega_mean) << ',' << format_double(row.omega_min) << ','
        << format_double(row.omega_max) << ',' << format_double(row.integration_time);
    for (double c : row.counts) out << ',' << format_double(c);
    out << '\n';
  }
}

void write_sweep_csv(const SweepDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_sweep_csv(data, out);
}

SweepDataset read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  const auto header = split_csv_line(line);
  if (header.size() != 8)
    throw ParseError("header must have 8 columns, found " + std::to_string(header.size()), 0);
  const std::array<std::string, 4> fixed = {"omega_mean", "omega_min", "omega_max",
                                            "integration_s"};
  for (int i = 0; i < 4; ++i)
    if (header[i] != fixed[i])
      throw ParseError("missing column '" + fixed[i] + "' (found '" + header[i] + "')", 0);

  SweepDataset data;
  if (std::equal(header.begin() + 4, header.end(), kPairChannels.begin(),
                 [](const std::string& a, const char* b) { return a == b; })) {
    data.mode = SweepMode::pairs;
  } else if (std::equal(header.begin() + 4, header.end(), kSinglesChannels.begin(),
                        [](const std::string& a, const char* b) { return a == b; })) {
    data.mode = SweepMode::singles;
  } else {
    throw ParseError("channel columns must be C12,C34,C23,C14 or D1,D2,D3,D4", 0);
  }

  int row_number = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row_number;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw ParseError("row " + std::to_string(row_number) + ": expected 8 fields, found " +
                           std::to_string(fields.size()),
                       row_number);
    SweepRow row;
    row.omega_mean = parse_double(fields[0], row_number, "omega_mean");
    row.omega_min = parse_double(fields[1], row_number, "omega_min");
    row.omega_max = parse_double(fields[2], row_number, "omega_max");
    row.integration_time = parse_double(fields[3], row_number, "integration_s");
    if (!(row.omega_min <= row.omega_mean && row.omega_mean <= row.omega_max))
      throw ParseError("row " + std::to_string(row_number) +
                           ": omega_min <= omega_mean <= omega_max violated",
                       row_number);
    if (!(row.integration_time > 0.0))
      throw ParseError("row " + std::to_string(row_number) + ": integration_s must be positive",
                       row_number);
    for (int c = 0; c < 4; ++c) {
      row.counts[c] = parse_double(fields[4 + c], row_number, data.channel_names()[c]);
      if (row.counts[c] < 0.0)
        throw ParseError("row " + std::to_string(row_number) + ": negative count in " +
                             data.channel_names()[c],
                         row_number);
    }
    data.rows.push_back(row);
  }
  return data;
}

SweepDataset read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_sweep_csv(in);
}

void write_visibility_csv(const std::vector<double>& omegas,
                          const std::vector<VisibilityPoint>& series, std::ostream& out) {
  out << "omega,visibility,sigma,defined\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(omegas.at(i)) << ',' << format_double(series[i].value) << ','
        << format_double(series[i].sigma) << ',' << (series[i].defined ? 1 : 0) << '\n';
  }
}

Json to_json(const SimulationConfig& config) {
  return Json{{"geometry",
               {{"fiber_length_m", config.geometry.fiber_length},
                {"coil_radius_m", config.geometry.coil_radius},
                {"wavelength_m", config.geometry.wavelength}}},
              {"rho00", config.rho00},
              {"offset_rad", config.offset_o},
              {"pair_rate_hz", config.pair_rate},
              {"background_rate_hz", config.background_rate},
              {"integration_s", config.integration_time},
              {"detector_efficiency", config.detector_efficiency},
              {"rng_seed", config.rng_seed},
              {"omega_grid", config.omega_grid},
              {"omega_jitter", config.omega_jitter},
              {"poisson_noise", config.poisson_noise}};
}

SimulationConfig simulation_config_from_json(const Json& j) {
  SimulationConfig config;
  try {
    const auto& geom = j.at("geometry");
    config.geometry.fiber_length = geom.at("fiber_length_m").get<double>();
    config.geometry.coil_radius = geom.at("coil_radius_m").get<double>();
    config.geometry.wavelength = geom.at("wavelength_m").get<double>();
    config.rho00 = j.value("rho00", 0.5);
    config.offset_o = j.value("offset_rad", 0.0);
    config.pair_rate = j.value("pair_rate_hz", 100.0);
    config.background_rate = j.value("background_rate_hz", 0.0);
    config.integration_time = j.value("integration_s", 40.0);
    if (j.contains("detector_efficiency"))
      config.detector_efficiency = json_to_array4(j.at("detector_efficiency"),
                                                  "detector_efficiency");
    config.rng_seed = j.value("rng_seed", std::uint64_t{0});
    if (j.contains("omega_grid"))
      config.omega_grid = j.at("omega_grid").get<std::vector<double>>();
    config.omega_jitter = j.value("omega_jitter", 0.0);
    config.poisson_noise = j.value("poisson_noise", true);
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("invalid simulation config: ") + e.what());
  }
  config.validate();
  return config;
}

Json to_json(const ChshCountGrid& grid) {
  Json counts = Json::array();
  for (const auto& row : grid.counts) counts.push_back(row);
  std::array<double, 4> alice_deg{}, bob_deg{};
  for (int i = 0; i < 4; ++i) {
    alice_deg[i] = grid.alice_angles[i] / kDegree;
    bob_deg[i] = grid.bob_angles[i] / kDegree;
  }
  return Json{{"target", to_string(grid.target)},
              {"alice_angles_deg", alice_deg},
              {"bob_angles_deg", bob_deg},
              {"integration_s", grid.integration_time},
              {"counts", counts}};
}

ChshCountGrid chsh_grid_from_json(const Json& j) {
  ChshCountGrid grid;
  try {
    const std::string target = j.at("target").get<std::string>();
    if (target == "phi_minus")
      grid.target = BellTarget::phi_minus;
    else if (target == "phi_plus")
      grid.target = BellTarget::phi_plus;
    else
      throw std::runtime_error("target must be phi_minus or phi_plus");
    const auto alice_deg = json_to_array4(j.at("alice_angles_deg"), "alice_angles_deg");
    const auto bob_deg = json_to_array4(j.at("bob_angles_deg"), "bob_angles_deg");
    for (int i = 0; i < 4; ++i) {
      grid.alice_angles[i] = alice_deg[i] * kDegree;
      grid.bob_angles[i] = bob_deg[i] * kDegree;
    }
    grid.integration_time = j.at("integration_s").get<double>();
    const auto& counts = j.at("counts");
    if (!counts.is_array() || counts.size() != 4)
      throw std::runtime_error("'counts' must be a 4x4 array");
    for (int i = 0; i < 4; ++i) grid.counts[i] = json_to_array4(counts[i], "counts");
    for (const auto& row : grid.counts)
      for (double c : row)
        if (c < 0.0) throw std::runtime_error("counts must be non-negative");
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("invalid CHSH grid: ") + e.what());
  }
  return grid;
}

Json to_json(const ChshSettings& settings) {
  return Json{{"alice_deg", {settings.alice_a / kDegree, settings.alice_a_prime / kDegree}},
              {"bob_deg", {settings.bob_b / kDegree, settings.bob_b_prime / kDegree}},
              {"target", to_string(settings.target)}};
}

ChshSettings chsh_settings_from_json(const Json& j) {
  ChshSettings settings;
  try {
    const auto alice = j.at("alice_deg");
    const auto bob = j.at("bob_deg");
    if (alice.size() != 2 || bob.size() != 2)
      throw std::runtime_error("'alice_deg' and 'bob_deg' must hold two angles each");
    settings.alice_a = alice[0].get<double>() * kDegree;
    settings.alice_a_prime = alice[1].get<double>() * kDegree;
    settings.bob_b = bob[0].get<double>() * kDegree;
    settings.bob_b_prime = bob[1].get<double>() * kDegree;
    const std::string target = j.at("target").get<std::string>();
    settings.target = target == "phi_plus" ? BellTarget::phi_plus : BellTarget::phi_minus;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("invalid CHSH settings: ") + e.what());
  }
  return settings;
}

namespace {

const char* to_string(FitStatus status) {
  switch (status) {
    case FitStatus::converged: return "converged";
    case FitStatus::max_iterations_reached: return "max_iterations_reached";
    case FitStatus::unidentifiable_frequency: return "unidentifiable_frequency";
  }
  return "?";
}

}  // namespace

Json to_json(const FringeFitReport& report) {
  Json cov = Json::array();
  for (const auto& row : report.covariance) cov.push_back(row);
  return Json{{"model", to_string(report.model.kind)},
              {"params",
               {{"amplitude", report.model.params.amplitude},
                {"scale_factor", report.model.params.scale_factor},
                {"offset_phase", report.model.params.offset_phase},
                {"baseline", report.model.params.baseline}}},
              {"standard_errors", report.standard_errors},
              {"covariance", cov},
              {"visibility", report.visibility},
              {"visibility_sigma", report.visibility_sigma},
              {"reduced_chi_square", report.reduced_chi_square},
              {"n_points", report.n_points},
              {"iterations", report.iterations},
              {"status", to_string(report.status)},
              {"diagnostic", report.diagnostic}};
}

Json to_json(const ChshReport& report) {
  const char* names[4] = {"E_ab", "E_abp", "E_apb", "E_apbp"};
  Json correlations;
  for (int i = 0; i < 4; ++i)
    correlations[names[i]] = {{"value", report.correlations[i].value},
                              {"sigma", report.correlations[i].sigma}};
  return Json{{"correlations", correlations},
              {"S", report.s},
              {"sigma_S", report.sigma_s},
              {"standard_deviations_above_2", report.standard_deviations_above_2}};
}

Json to_json(const BoundedDensityMatrix& matrix) {
  // Lower bound matrix: measured diagonal plus the pinned anti-diagonal.
  Json lower = Json::array();
  Json upper = Json::array();
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> lo{}, hi{};
    for (int j = 0; j < 4; ++j) {
      lo[j] = i == j ? matrix.diagonal[i]
                     : ((i == 0 && j == 3) || (i == 3 && j == 0)
                            ? std::abs(matrix.antidiag_re_pinned)
                            : 0.0);
      hi[j] = matrix.offdiag_upper[i][j];
    }
    lower.push_back(lo);
    upper.push_back(hi);
  }
  return Json{{"target", to_string(matrix.target)},
              {"diagonal", matrix.diagonal},
              {"diagonal_sigma", matrix.diagonal_sigma},
              {"antidiag_re_pinned", matrix.antidiag_re_pinned},
              {"antidiag_re_lower", matrix.antidiag_re_lower},
              {"antidiag_re_upper", matrix.antidiag_re_upper},
              {"antidiag_clamped", matrix.antidiag_clamped},
              {"s_exp", matrix.s_exp},
              {"lower_bound_matrix", lower},
              {"upper_bound_matrix", upper},
              {"purity_lower", matrix.purity_lower},
              {"purity_upper", matrix.purity_upper}};
}

std::string report_csv(const FringeFitReport& report) {
  std::ostringstream out;
  out << "parameter,value,sigma\n";
  const char* names[4] = {"amplitude", "scale_factor", "offset_phase", "baseline"};
  const auto values = report.model.params.as_array();
  for (int i = 0; i < 4; ++i)
    out << names[i] << ',' << format_double(values[i]) << ','
        << format_double(report.standard_errors[i]) << '\n';
  out << "visibility," << format_double(report.visibility) << ','
      << format_double(report.visibility_sigma) << '\n';
  out << "reduced_chi_square," << format_double(report.reduced_chi_square) << ",\n";
  return out.str();
}

std::string report_csv(const ChshReport& report) {
  std::ostringstream out;
  out << "quantity,value,sigma\n";
  const char* names[4] = {"E_ab", "E_abp", "E_apb", "E_apbp"};
  for (int i = 0; i < 4; ++i)
    out << names[i] << ',' << format_double(report.correlations[i].value) << ','
        << format_double(report.correlations[i].sigma) << '\n';
  out << "S," << format_double(report.s) << ',' << format_double(report.sigma_s) << '\n';
  out << "standard_deviations_above_2," << format_double(report.standard_deviations_above_2)
      << ",\n";
  return out.str();
}

std::string report_csv(const BoundedDensityMatrix& matrix) {
  std::ostringstream out;
  out << "quantity,value,sigma\n";
  const char* names[4] = {"rho00", "rho01", "rho10", "rho11"};
  for (int i = 0; i < 4; ++i)
    out << names[i] << ',' << format_double(matrix.diagonal[i]) << ','
        << format_double(matrix.diagonal_sigma[i]) << '\n';
  out << "antidiag_re_pinned," << format_double(matrix.antidiag_re_pinned) << ",\n";
  out << "purity_lower," << format_double(matrix.purity_lower) << ",\n";
  out << "purity_upper," << format_double(matrix.purity_upper) << ",\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sagbell
