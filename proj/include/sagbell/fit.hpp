#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sagbell/simulate.hpp"

namespace sagbell {

enum class FringeKind { sin2, cos2, cosine };

std::string to_string(FringeKind kind);

/// Fringe parameters (A, S_T, o, D) for
///   sin2:   A sin^2(S_T x + o) + D
///   cos2:   A cos^2(S_T x + o) + D
///   cosine: A cos(2 S_T x + o) + D
struct FringeParams {
  double amplitude = 0.0;
  double scale_factor = 0.0;
  double offset_phase = 0.0;
  double baseline = 0.0;

  std::array<double, 4> as_array() const {
    return {amplitude, scale_factor, offset_phase, baseline};
  }
};

struct FringeModel {
  FringeKind kind = FringeKind::sin2;
  FringeParams params;

  double evaluate(double x) const;
};

/// Abscissas, values and 1-sigma errors; weights are 1/sigma^2.
struct WeightedSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;
};

/// Channel counts with Poisson errors, sigma = sqrt(count) floored at 1.
WeightedSeries channel_series(const SweepDataset& data, const std::string& channel);

enum class FitStatus { converged, max_iterations_reached, unidentifiable_frequency };

using Matrix4 = std::array<std::array<double, 4>, 4>;

struct FringeFitReport {
  FringeModel model;  // canonical form: A > 0, S_T > 0, o wrapped into one period
  std::array<double, 4> standard_errors{};
  Matrix4 covariance{};
  double visibility = 0.0;
  double visibility_sigma = 0.0;
  double reduced_chi_square = 0.0;
  int n_points = 0;
  int iterations = 0;
  FitStatus status = FitStatus::converged;
  std::string diagnostic;

  bool converged() const { return status == FitStatus::converged; }
};

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;  // relative parameter step
  double frequency_min = 0.1;    // scale-factor scan range for the start guess
  double frequency_max = 5.0;
  int frequency_steps = 2000;
  int phase_steps = 360;
};

/// Start parameters: baseline from the minimum, amplitude from the span,
/// scale factor from a periodogram scan, phase from a 1-D scan. Empty when
/// the series is constant (no identifiable frequency).
std::optional<FringeParams> initial_guess(FringeKind kind, const WeightedSeries& data,
                                          const FitOptions& options = {});

/// Weighted least squares by damped Gauss-Newton. Requires at least 8 points.
/// Parameter errors come from the inverse normal matrix with the supplied
/// absolute sigmas; the covariance is not rescaled by the reduced chi-square.
/// Non-convergence is reported in the status, with the last iterate kept.
FringeFitReport fit_fringe(const WeightedSeries& data, FringeKind kind,
                           const FitOptions& options = {});

/// Fringe contrast from fitted parameters: A/(A + 2D) for sin2/cos2, where
/// the fringe swings between D and A + D. For the cosine model the series is
/// already normalized and the contrast is the amplitude itself.
std::pair<double, double> visibility_from_fit(const FringeFitReport& report);

/// Norm of the weighted residual gradient at the given parameters.
double weighted_gradient_norm(const WeightedSeries& data, FringeKind kind,
                              const FringeParams& params);

struct VisibilityPoint {
  double value = 0.0;
  double sigma = 0.0;
  bool defined = true;  // false when all four counts vanish
};

/// Per-point normalized correlation (dd + aa - da - ad) / (dd + aa + da + ad)
/// with Gaussian propagation of Poisson count errors (sigma floor 1).
std::vector<VisibilityPoint> visibility_series(std::span<const double> c_dd,
                                               std::span<const double> c_aa,
                                               std::span<const double> c_da,
                                               std::span<const double> c_ad);

}  // namespace sagbell
