#pragma once

#include <array>
#include <complex>
#include <utility>

namespace sagbell {

using Complex = std::complex<double>;

/// Two-photon polarization amplitudes over the product basis HH, HV, VH, VV.
struct TwoPhotonState {
  std::array<Complex, 4> amp{};

  double norm() const;

  /// Amplitudes scaled to unit norm. Throws on a zero vector.
  static TwoPhotonState normalized(const std::array<Complex, 4>& amplitudes);

  /// One H photon and one V photon sharing a spatial mode. The photons are
  /// indistinguishable, so the labeled representation is exchange symmetric:
  /// (|HV> + |VH>)/sqrt(2).
  static TwoPhotonState source_pair_hv();
};

/// Single-photon amplitudes over the basis H, V.
struct SinglePhotonState {
  std::array<Complex, 2> amp{};

  double norm() const;
  static SinglePhotonState normalized(const std::array<Complex, 2>& amplitudes);
  static SinglePhotonState diagonal();  // (|H> + |V>)/sqrt(2)
};

enum class Port { transmitted, reflected };

/// Linear polarization analyzer. The transmitted port projects onto `angle`,
/// the reflected port onto angle + pi/2.
struct AnalyzerSetting {
  double angle = 0.0;  // radians
  Port port = Port::transmitted;

  double projection_angle() const;
};

/// sqrt(rho00)|HH> - sqrt(1-rho00) e^{i phase}|VV>, rho00 in [0, 1].
TwoPhotonState make_phi_state(double rho00, double phase);

/// Same half-wave-plate rotation applied to both photons. A plate at angle
/// theta maps (H, V) by the reflection about theta:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
TwoPhotonState apply_hwp_source(const TwoPhotonState& pair, double hwp_angle);

/// Loop phase on the reflected polarization: a basis state carrying k V
/// photons picks up e^{i k (phi_s + offset_o)}; H components are untouched.
/// photon_number must match the state (2 here, 1 for the single-photon
/// overload) and serves as a contract check.
TwoPhotonState apply_sagnac(const TwoPhotonState& state, double phi_s, double offset_o,
                            int photon_number);
SinglePhotonState apply_sagnac(const SinglePhotonState& state, double phi_s, double offset_o,
                               int photon_number);

/// |<a b | state>|^2 for product linear-polarization projectors.
/// The state norm must not deviate from 1 by more than 1e-9.
double coincidence_probability(const TwoPhotonState& state, const AnalyzerSetting& alice,
                               const AnalyzerSetting& bob);

/// (cos^2(phi_s + o), sin^2(phi_s + o)); the two sum to 1 exactly.
std::pair<double, double> bell_channel_probabilities(double phi_s, double offset_o);

/// Detection probability for a diagonal single photon after the loop, measured
/// behind a half-wave plate at 22.5 deg. The transmitted port of an analyzer
/// at 0 is the D port, cos^2((phi_s+o)/2); its reflected port is the A port,
/// sin^2((phi_s+o)/2). The fringe runs at half the pair frequency.
double single_photon_port_probability(double phi_s, double offset_o,
                                      const AnalyzerSetting& analyzer);

/// |<a|b>| on unit vectors; 1 means equal up to a global phase.
double overlap_magnitude(const TwoPhotonState& a, const TwoPhotonState& b);
double overlap_magnitude(const SinglePhotonState& a, const SinglePhotonState& b);

}  // namespace sagbell
