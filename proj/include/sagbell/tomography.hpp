#pragma once

#include <array>

#include "sagbell/bell.hpp"
#include "sagbell/simulate.hpp"

namespace sagbell {

using Matrix4d = std::array<std::array<double, 4>, 4>;

struct DiagonalEstimate {
  std::array<double, 4> value{};  // rho00, rho01, rho10, rho11 (HH, HV, VH, VV)
  std::array<double, 4> sigma{};  // from the inversion covariance, pre-clamp
};

/// Diagonal elements by weighted linear inversion over all 16 cells, with the
/// real anti-diagonal coherence as nuisance parameter and the remaining
/// coherences taken as zero. Cell probabilities are counts normalized within
/// each 2x2 setting block. Negative solutions are clamped to zero and the
/// trace renormalized to 1.
DiagonalEstimate estimate_diagonals(const ChshCountGrid& grid);

/// bound(i,j) = sqrt(rho_ii rho_jj) for every element; on the diagonal this
/// reduces to the element itself.
Matrix4d cauchy_schwarz_bounds(const std::array<double, 4>& diagonal);

/// Re rho_0011 pinned by the measured S through
///   S = sqrt(2) (<ZZ> -/+ <XX>)   (minus: phi-minus target, plus: phi-plus)
/// with <ZZ> from the diagonal and <XX> = 2 Re rho_0011. Throws when the
/// result exceeds the Cauchy-Schwarz bound by more than `tolerance`.
double antidiagonal_from_chsh(const std::array<double, 4>& diagonal, double s_exp,
                              BellTarget target, double tolerance = 1e-9);

/// Density matrix knowledge recoverable from one CHSH count grid: measured
/// diagonals, the CHSH-pinned real anti-diagonal, Cauchy-Schwarz magnitude
/// bounds on everything else, and the resulting purity range.
struct BoundedDensityMatrix {
  std::array<double, 4> diagonal{};
  std::array<double, 4> diagonal_sigma{};
  double antidiag_re_pinned = 0.0;   // signed value used in the lower matrix
  double antidiag_re_lower = 0.0;    // interval for Re rho_0011, ordered
  double antidiag_re_upper = 0.0;
  bool antidiag_clamped = false;     // pin exceeded the bound and was clipped
  Matrix4d offdiag_upper{};          // Cauchy-Schwarz magnitudes
  double s_exp = 0.0;
  double purity_lower = 0.0;
  double purity_upper = 0.0;
  BellTarget target = BellTarget::phi_minus;
};

/// Purity range. The lower bound populates only the diagonal and the pinned
/// anti-diagonal; the upper bound puts every off-diagonal magnitude at its
/// Cauchy-Schwarz maximum (generally not a valid state, so this is a bound on
/// Tr rho^2, not a state property) and is clipped at 1.
std::pair<double, double> purity_range(const BoundedDensityMatrix& matrix);

/// Full chain: diagonals, measured S, pinned anti-diagonal, bounds, purity.
/// With clamp_to_bound the pinned value is clipped into the Cauchy-Schwarz
/// interval instead of raising, which noisy grids routinely require.
BoundedDensityMatrix bounded_tomography(const ChshCountGrid& grid, bool clamp_to_bound = true);

}  // namespace sagbell
