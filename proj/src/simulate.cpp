#include "sagbell/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sagbell/bell.hpp"
#include "sagbell/random.hpp"

namespace sagbell {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Detector wiring. Alice reads D1 (A port, reflected) and D3 (D port,
// transmitted); Bob reads D2 (D port) and D4 (A port). This reproduces the
// pair channels C12/C34 ~ cos^2 and C23/C14 ~ sin^2 together with singles
// D1/D4 ~ sin^2 and D2/D3 ~ cos^2 at half frequency.
const AnalyzerSetting kAliceD{kQuarterPi, Port::transmitted};
const AnalyzerSetting kAliceA{kQuarterPi, Port::reflected};
const AnalyzerSetting kBobD{kQuarterPi, Port::transmitted};
const AnalyzerSetting kBobA{kQuarterPi, Port::reflected};

double realize(double mean, CountingRng& rng, bool poisson_noise) {
  return poisson_noise ? double(rng.poisson(mean)) : mean;
}

}  // namespace

std::string to_string(SweepMode mode) { return mode == SweepMode::pairs ? "pairs" : "singles"; }

std::string to_string(BellTarget target) {
  return target == BellTarget::phi_minus ? "phi_minus" : "phi_plus";
}

void SimulationConfig::validate() const {
  geometry.validate();
  if (!(rho00 >= 0.0 && rho00 <= 1.0)) throw std::invalid_argument("rho00 must lie in [0, 1]");
  if (!(integration_time > 0.0)) throw std::invalid_argument("integration time must be positive");
  if (pair_rate < 0.0) throw std::invalid_argument("pair rate must be non-negative");
  if (background_rate < 0.0) throw std::invalid_argument("background rate must be non-negative");
  if (omega_jitter < 0.0) throw std::invalid_argument("omega jitter must be non-negative");
  for (double eff : detector_efficiency)
    if (!(eff > 0.0 && eff <= 1.0))
      throw std::invalid_argument("detector efficiencies must lie in (0, 1]");
}

const std::array<const char*, 4>& SweepDataset::channel_names() const {
  return mode == SweepMode::pairs ? kPairChannels : kSinglesChannels;
}

int SweepDataset::channel_index(const std::string& name) const {
  const auto& names = channel_names();
  for (int i = 0; i < 4; ++i)
    if (name == names[i]) return i;
  return -1;
}

std::vector<double> SweepDataset::omegas() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.omega_mean);
  return out;
}

std::vector<double> SweepDataset::channel(int index) const {
  if (index < 0 || index > 3) throw std::invalid_argument("channel index out of range");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.counts[index]);
  return out;
}

std::array<double, 4> ChshSettings::alice_angles() const {
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {alice_a, alice_a + half_pi, alice_a_prime, alice_a_prime + half_pi};
}

std::array<double, 4> ChshSettings::bob_angles() const {
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {bob_b, bob_b + half_pi, bob_b_prime, bob_b_prime + half_pi};
}

TwoPhotonState evolved_pair_state(const SimulationConfig& config, double omega) {
  const double phi_s = sagnac_phase(scale_factor(config.geometry), omega);
  return apply_sagnac(make_phi_state(config.rho00, 0.0), phi_s, config.offset_o, 2);
}

SweepDataset simulate_sweep(const SimulationConfig& config, SweepMode mode) {
  config.validate();
  if (config.omega_grid.empty()) throw std::invalid_argument("omega grid must not be empty");

  const double st = scale_factor(config.geometry);
  const auto& eff = config.detector_efficiency;
  SweepDataset data;
  data.mode = mode;
  data.rows.reserve(config.omega_grid.size());

  for (std::size_t i = 0; i < config.omega_grid.size(); ++i) {
    const double omega = config.omega_grid[i];
    std::array<double, 4> prob{};
    std::array<double, 4> channel_eff{};
    if (mode == SweepMode::pairs) {
      const TwoPhotonState state = evolved_pair_state(config, omega);
      prob = {coincidence_probability(state, kAliceA, kBobD),   // C12
              coincidence_probability(state, kAliceD, kBobA),   // C34
              coincidence_probability(state, kAliceD, kBobD),   // C23
              coincidence_probability(state, kAliceA, kBobA)};  // C14
      channel_eff = {eff[0] * eff[1], eff[2] * eff[3], eff[1] * eff[2], eff[0] * eff[3]};
    } else {
      const double phi_s = sagnac_phase(st, omega);
      const AnalyzerSetting d_port{0.0, Port::transmitted};
      const AnalyzerSetting a_port{0.0, Port::reflected};
      const double p_d = single_photon_port_probability(phi_s, config.offset_o, d_port);
      const double p_a = single_photon_port_probability(phi_s, config.offset_o, a_port);
      prob = {p_a, p_d, p_d, p_a};  // D1..D4
      channel_eff = {eff[0], eff[1], eff[2], eff[3]};
    }

    CountingRng rng = CountingRng::substream(config.rng_seed, i);
    SweepRow row;
    row.omega_mean = omega;
    row.omega_min = omega - std::abs(omega) * config.omega_jitter;
    row.omega_max = omega + std::abs(omega) * config.omega_jitter;
    row.integration_time = config.integration_time;
    for (int ch = 0; ch < 4; ++ch) {
      const double mean = config.integration_time *
                          (config.pair_rate * prob[ch] * channel_eff[ch] + config.background_rate);
      row.counts[ch] = realize(mean, rng, config.poisson_noise);
    }
    data.rows.push_back(row);
  }
  return data;
}

ChshCountGrid simulate_chsh(const SimulationConfig& config, BellTarget target, double omega) {
  config.validate();
  const ChshSettings settings = canonical_settings(target);
  const TwoPhotonState state = evolved_pair_state(config, omega);
  const auto alice_angles = settings.alice_angles();
  const auto bob_angles = settings.bob_angles();
  const auto& eff = config.detector_efficiency;

  ChshCountGrid grid;
  grid.alice_angles = alice_angles;
  grid.bob_angles = bob_angles;
  grid.integration_time = config.integration_time;
  grid.target = target;

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // Unbarred settings land on the transmitted ports (D3 for Alice, D2
      // for Bob), barred settings on the reflected ports (D1, D4).
      const double cell_eff = (i % 2 == 0 ? eff[2] : eff[0]) * (j % 2 == 0 ? eff[1] : eff[3]);
      const AnalyzerSetting alice{alice_angles[i], Port::transmitted};
      const AnalyzerSetting bob{bob_angles[j], Port::transmitted};
      const double p = coincidence_probability(state, alice, bob);
      const double mean = config.integration_time *
                          (config.pair_rate * p * cell_eff + config.background_rate);
      CountingRng rng = CountingRng::substream(config.rng_seed, 16 + std::uint64_t(4 * i + j));
      grid.counts[i][j] = realize(mean, rng, config.poisson_noise);
    }
  }
  return grid;
}

}  // namespace sagbell
