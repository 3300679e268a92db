#pragma once

namespace sagbell {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI value

/// Fiber loop geometry. All lengths in meters, strictly positive.
struct SagnacGeometry {
  double fiber_length = 0.0;
  double coil_radius = 0.0;
  double wavelength = 0.0;

  void validate() const;
};

/// Phase per unit angular velocity: 4 pi L r / (lambda c), in seconds.
double scale_factor(const SagnacGeometry& geometry);

/// phi_s = S_T * Omega.
double sagnac_phase(double scale_factor_s, double omega_rad_per_s);

struct FiberLengthEstimate {
  double length;  // m
  double sigma;   // m, first-order propagation of the scale-factor error only
};

/// Inverts the scale factor to a fiber length at the given coil radius.
FiberLengthEstimate fiber_length_from_scale(double scale_factor_s, double scale_factor_sigma,
                                            double coil_radius, double wavelength);

/// Geometry whose scale factor equals the requested value.
SagnacGeometry geometry_for_scale(double scale_factor_s, double coil_radius, double wavelength);

}  // namespace sagbell
