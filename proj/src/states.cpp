#include "sagbell/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sagbell {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double squared_norm(const std::array<Complex, 4>& a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return s;
}

double squared_norm(const std::array<Complex, 2>& a) {
  return std::norm(a[0]) + std::norm(a[1]);
}

}  // namespace

double TwoPhotonState::norm() const { return std::sqrt(squared_norm(amp)); }

TwoPhotonState TwoPhotonState::normalized(const std::array<Complex, 4>& amplitudes) {
  const double n = std::sqrt(squared_norm(amplitudes));
  if (n <= 0.0) throw std::invalid_argument("cannot normalize a zero state vector");
  TwoPhotonState out;
  for (int i = 0; i < 4; ++i) out.amp[i] = amplitudes[i] / n;
  return out;
}

TwoPhotonState TwoPhotonState::source_pair_hv() {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return TwoPhotonState{{Complex{0.0}, Complex{inv_sqrt2}, Complex{inv_sqrt2}, Complex{0.0}}};
}

double SinglePhotonState::norm() const { return std::sqrt(squared_norm(amp)); }

SinglePhotonState SinglePhotonState::normalized(const std::array<Complex, 2>& amplitudes) {
  const double n = std::sqrt(squared_norm(amplitudes));
  if (n <= 0.0) throw std::invalid_argument("cannot normalize a zero state vector");
  return SinglePhotonState{{amplitudes[0] / n, amplitudes[1] / n}};
}

SinglePhotonState SinglePhotonState::diagonal() {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return SinglePhotonState{{Complex{inv_sqrt2}, Complex{inv_sqrt2}}};
}

double AnalyzerSetting::projection_angle() const {
  return port == Port::transmitted ? angle : angle + kHalfPi;
}

TwoPhotonState make_phi_state(double rho00, double phase) {
  if (!(rho00 >= 0.0 && rho00 <= 1.0))
    throw std::invalid_argument("rho00 must lie in [0, 1]");
  const double a = std::sqrt(rho00);
  const double b = std::sqrt(1.0 - rho00);
  const Complex phase_factor = std::polar(1.0, phase);
  return TwoPhotonState{{Complex{a}, Complex{0.0}, Complex{0.0}, -b * phase_factor}};
}

TwoPhotonState apply_hwp_source(const TwoPhotonState& pair, double hwp_angle) {
  const double c = std::cos(2.0 * hwp_angle);
  const double s = std::sin(2.0 * hwp_angle);
  // Jones matrix [[c, s], [s, -c]] on each photon.
  const std::array<std::array<double, 2>, 2> h = {{{c, s}, {s, -c}}};
  TwoPhotonState out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex sum{0.0};
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) sum += h[i][k] * h[j][l] * pair.amp[2 * k + l];
      out.amp[2 * i + j] = sum;
    }
  }
  return out;
}

namespace {

void check_photon_number(int photon_number, int expected) {
  if (photon_number != 1 && photon_number != 2)
    throw std::invalid_argument("photon number must be 1 or 2");
  if (photon_number != expected)
    throw std::invalid_argument("photon number does not match the state");
}

}  // namespace

TwoPhotonState apply_sagnac(const TwoPhotonState& state, double phi_s, double offset_o,
                            int photon_number) {
  check_photon_number(photon_number, 2);
  const double phase = phi_s + offset_o;
  const Complex one_v = std::polar(1.0, phase);
  const Complex two_v = std::polar(1.0, 2.0 * phase);
  TwoPhotonState out = state;
  out.amp[1] *= one_v;  // HV
  out.amp[2] *= one_v;  // VH
  out.amp[3] *= two_v;  // VV
  return out;
}

SinglePhotonState apply_sagnac(const SinglePhotonState& state, double phi_s, double offset_o,
                               int photon_number) {
  check_photon_number(photon_number, 1);
  SinglePhotonState out = state;
  out.amp[1] *= std::polar(1.0, phi_s + offset_o);
  return out;
}

double coincidence_probability(const TwoPhotonState& state, const AnalyzerSetting& alice,
                               const AnalyzerSetting& bob) {
  if (std::abs(state.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("coincidence_probability requires a normalized state");
  const double a = alice.projection_angle();
  const double b = bob.projection_angle();
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  const Complex overlap = ca * cb * state.amp[0] + ca * sb * state.amp[1] +
                          sa * cb * state.amp[2] + sa * sb * state.amp[3];
  return std::norm(overlap);
}

std::pair<double, double> bell_channel_probabilities(double phi_s, double offset_o) {
  const double c = std::cos(phi_s + offset_o);
  const double p_minus = c * c;
  return {p_minus, 1.0 - p_minus};
}

double single_photon_port_probability(double phi_s, double offset_o,
                                      const AnalyzerSetting& analyzer) {
  const SinglePhotonState after_loop =
      apply_sagnac(SinglePhotonState::diagonal(), phi_s, offset_o, 1);
  // Detection waveplate at 22.5 deg maps H->D, V->A ahead of the analyzer.
  const double c = std::cos(std::numbers::pi / 4.0);
  const double s = std::sin(std::numbers::pi / 4.0);
  const SinglePhotonState measured{{c * after_loop.amp[0] + s * after_loop.amp[1],
                                    s * after_loop.amp[0] - c * after_loop.amp[1]}};
  const double theta = analyzer.projection_angle();
  const Complex overlap = std::cos(theta) * measured.amp[0] + std::sin(theta) * measured.amp[1];
  return std::norm(overlap);
}

double overlap_magnitude(const TwoPhotonState& a, const TwoPhotonState& b) {
  Complex dot{0.0};
  for (int i = 0; i < 4; ++i) dot += std::conj(a.amp[i]) * b.amp[i];
  return std::abs(dot);
}

double overlap_magnitude(const SinglePhotonState& a, const SinglePhotonState& b) {
  Complex dot = std::conj(a.amp[0]) * b.amp[0] + std::conj(a.amp[1]) * b.amp[1];
  return std::abs(dot);
}

}  // namespace sagbell
