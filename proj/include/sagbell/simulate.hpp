#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sagbell/geometry.hpp"
#include "sagbell/states.hpp"

namespace sagbell {

enum class SweepMode { pairs, singles };
enum class BellTarget { phi_minus, phi_plus };

std::string to_string(SweepMode mode);
std::string to_string(BellTarget target);

/// Everything a synthetic run needs. A dataset is a pure function of this
/// struct, seed included.
struct SimulationConfig {
  SagnacGeometry geometry;
  double rho00 = 0.5;           // weight of the HH component
  double offset_o = 0.0;        // birefringence phase offset, radians
  double pair_rate = 100.0;     // source rate at unit channel probability, 1/s
  double background_rate = 0.0; // accidental counts per channel, 1/s
  double integration_time = 40.0;  // s
  std::array<double, 4> detector_efficiency{1.0, 1.0, 1.0, 1.0};  // D1..D4
  std::uint64_t rng_seed = 0;
  std::vector<double> omega_grid;  // rad/s
  double omega_jitter = 0.0;       // relative half-spread, fills omega_min/max
  bool poisson_noise = true;       // false: counts are exact expected values

  void validate() const;
};

/// Channel order for pair sweeps. C12 and C34 are the orthogonal-polarization
/// combinations (cos^2 fringes), C23 and C14 the parallel ones (sin^2).
inline constexpr std::array<const char*, 4> kPairChannels = {"C12", "C34", "C23", "C14"};
/// Detector order for singles sweeps. D2 and D3 sit on the D ports (cos^2
/// half-frequency fringes), D1 and D4 on the A ports (sin^2).
inline constexpr std::array<const char*, 4> kSinglesChannels = {"D1", "D2", "D3", "D4"};

struct SweepRow {
  double omega_mean = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  double integration_time = 0.0;
  std::array<double, 4> counts{};  // kPairChannels or kSinglesChannels order
};

struct SweepDataset {
  SweepMode mode = SweepMode::pairs;
  std::vector<SweepRow> rows;

  const std::array<const char*, 4>& channel_names() const;
  int channel_index(const std::string& name) const;  // -1 if unknown
  std::vector<double> omegas() const;
  std::vector<double> channel(int index) const;
};

/// CHSH analyzer angles, radians. Orthogonal complements are implicit:
/// the barred settings sit at +pi/2.
struct ChshSettings {
  double alice_a = 0.0;
  double alice_a_prime = 0.0;
  double bob_b = 0.0;
  double bob_b_prime = 0.0;
  BellTarget target = BellTarget::phi_minus;

  std::array<double, 4> alice_angles() const;  // a, a+pi/2, a', a'+pi/2
  std::array<double, 4> bob_angles() const;
};

/// 16 coincidence counts indexed by (alice, bob) setting, rows and columns in
/// the order (x, x_perp, x', x'_perp) matching ChshSettings::*_angles().
struct ChshCountGrid {
  std::array<std::array<double, 4>, 4> counts{};
  std::array<double, 4> alice_angles{};
  std::array<double, 4> bob_angles{};
  double integration_time = 0.0;
  BellTarget target = BellTarget::phi_minus;
};

/// State after source plate and loop: sqrt(rho00)|HH> - sqrt(rho11)
/// e^{i 2(phi_s+o)}|VV> with phi_s = S_T * omega.
TwoPhotonState evolved_pair_state(const SimulationConfig& config, double omega);

/// Counts versus angular velocity. Expected count per channel is
/// T * (rate * probability * efficiency + background); the realized count is
/// Poisson unless config.poisson_noise is off, in which case the expectation
/// itself is stored (generally fractional).
SweepDataset simulate_sweep(const SimulationConfig& config, SweepMode mode);

/// 16-cell CHSH measurement at one angular velocity.
ChshCountGrid simulate_chsh(const SimulationConfig& config, BellTarget target, double omega);

}  // namespace sagbell
