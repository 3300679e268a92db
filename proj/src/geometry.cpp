#include "sagbell/geometry.hpp"

#include <numbers>
#include <stdexcept>

namespace sagbell {

void SagnacGeometry::validate() const {
  if (!(fiber_length > 0.0)) throw std::invalid_argument("fiber length must be positive");
  if (!(coil_radius > 0.0)) throw std::invalid_argument("coil radius must be positive");
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
}

double scale_factor(const SagnacGeometry& geometry) {
  geometry.validate();
  return 4.0 * std::numbers::pi * geometry.fiber_length * geometry.coil_radius /
         (geometry.wavelength * kSpeedOfLight);
}

double sagnac_phase(double scale_factor_s, double omega_rad_per_s) {
  return scale_factor_s * omega_rad_per_s;
}

FiberLengthEstimate fiber_length_from_scale(double scale_factor_s, double scale_factor_sigma,
                                            double coil_radius, double wavelength) {
  if (!(coil_radius > 0.0)) throw std::invalid_argument("coil radius must be positive");
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(scale_factor_s > 0.0)) throw std::invalid_argument("scale factor must be positive");
  if (scale_factor_sigma < 0.0) throw std::invalid_argument("scale factor sigma must be >= 0");
  const double length =
      scale_factor_s * wavelength * kSpeedOfLight / (4.0 * std::numbers::pi * coil_radius);
  return {length, length * scale_factor_sigma / scale_factor_s};
}

SagnacGeometry geometry_for_scale(double scale_factor_s, double coil_radius, double wavelength) {
  const auto estimate = fiber_length_from_scale(scale_factor_s, 0.0, coil_radius, wavelength);
  return SagnacGeometry{estimate.length, coil_radius, wavelength};
}

}  // namespace sagbell
