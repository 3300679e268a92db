#include "sagbell/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "linalg.hpp"

namespace sagbell {

namespace {

// Probability model for a cell at analyzer angles (a, b):
//   P = rho00 ca^2 cb^2 + rho01 ca^2 sb^2 + rho10 sa^2 cb^2 + rho11 sa^2 sb^2
//       + (sin 2a sin 2b / 4) * (2 Re rho0011)
// assuming the single-photon coherences and rho0110 vanish.
std::array<double, 5> cell_design_row(double a, double b) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  return {ca * ca * cb * cb, ca * ca * sb * sb, sa * sa * cb * cb, sa * sa * sb * sb,
          0.25 * std::sin(2.0 * a) * std::sin(2.0 * b)};
}

}  // namespace

DiagonalEstimate estimate_diagonals(const ChshCountGrid& grid) {
  bool alice_has_hv = false;
  for (double a : grid.alice_angles)
    if (std::abs(std::remainder(a, std::numbers::pi)) < 1e-9) alice_has_hv = true;
  if (!alice_has_hv)
    throw std::invalid_argument("grid lacks an H/V projection on Alice's side");

  // Probabilities from counts, normalized within each 2x2 setting block; the
  // four outcomes of one basis choice are exhaustive and sum to the block
  // total up to noise.
  double xtx[25] = {};
  double xty[5] = {};
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      double block_total = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) block_total += grid.counts[2 * bi + i][2 * bj + j];
      if (block_total <= 0.0)
        throw std::domain_error("tomography undefined: a setting block has zero counts");
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const int row = 2 * bi + i, col = 2 * bj + j;
          const double count = grid.counts[row][col];
          const double p = count / block_total;
          // Poisson variance on the numerator, block total treated as fixed.
          const double variance = std::max(count, 1.0) / (block_total * block_total);
          const double w = 1.0 / variance;
          const auto design = cell_design_row(grid.alice_angles[row], grid.bob_angles[col]);
          for (int u = 0; u < 5; ++u) {
            xty[u] += w * design[u] * p;
            for (int v = 0; v <= u; ++v) xtx[5 * u + v] += w * design[u] * design[v];
          }
        }
      }
    }
  }
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) xtx[5 * u + v] = xtx[5 * v + u];

  double cov[25];
  std::copy(std::begin(xtx), std::end(xtx), std::begin(cov));
  if (!detail::spd_inverse(cov, 5))
    throw std::domain_error("settings do not span diagonal: singular design matrix");

  double solution[5] = {};
  for (int u = 0; u < 5; ++u)
    for (int v = 0; v < 5; ++v) solution[u] += cov[5 * u + v] * xty[v];

  DiagonalEstimate estimate;
  double trace = 0.0;
  for (int u = 0; u < 4; ++u) {
    estimate.value[u] = std::max(0.0, solution[u]);
    estimate.sigma[u] = std::sqrt(std::max(0.0, cov[5 * u + u]));
    trace += estimate.value[u];
  }
  if (trace <= 0.0) throw std::domain_error("tomography produced an empty diagonal");
  for (int u = 0; u < 4; ++u) estimate.value[u] /= trace;
  return estimate;
}

Matrix4d cauchy_schwarz_bounds(const std::array<double, 4>& diagonal) {
  for (double d : diagonal)
    if (d < 0.0) throw std::invalid_argument("diagonal entries must be non-negative");
  Matrix4d bounds{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) bounds[i][j] = std::sqrt(diagonal[i] * diagonal[j]);
  return bounds;
}

double antidiagonal_from_chsh(const std::array<double, 4>& diagonal, double s_exp,
                              BellTarget target, double tolerance) {
  const double zz = diagonal[0] - diagonal[1] - diagonal[2] + diagonal[3];
  // S = sqrt(2) (<ZZ> - <XX>) for phi-minus, + <XX> for phi-plus, with
  // <XX> = 2 Re rho0011 when the inner coherences vanish.
  const double xx = target == BellTarget::phi_minus ? zz - s_exp / std::numbers::sqrt2
                                                    : s_exp / std::numbers::sqrt2 - zz;
  const double re = xx / 2.0;
  const double bound = std::sqrt(diagonal[0] * diagonal[3]);
  if (std::abs(re) > bound + tolerance) {
    std::ostringstream msg;
    msg << "pinned |Re rho0011| = " << std::abs(re)
        << " exceeds the Cauchy-Schwarz bound " << bound;
    throw std::domain_error(msg.str());
  }
  return re;
}

std::pair<double, double> purity_range(const BoundedDensityMatrix& matrix) {
  double diag_sq = 0.0;
  for (double d : matrix.diagonal) diag_sq += d * d;

  const double pinned = matrix.antidiag_re_pinned;
  const double lower = diag_sq + 2.0 * pinned * pinned;

  double off_sq = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) off_sq += matrix.offdiag_upper[i][j] * matrix.offdiag_upper[i][j];
  const double upper = std::min(1.0, diag_sq + 2.0 * off_sq);

  return {std::min(lower, upper), upper};
}

BoundedDensityMatrix bounded_tomography(const ChshCountGrid& grid, bool clamp_to_bound) {
  BoundedDensityMatrix out;
  out.target = grid.target;

  const DiagonalEstimate diag = estimate_diagonals(grid);
  out.diagonal = diag.value;
  out.diagonal_sigma = diag.sigma;

  const ChshReport report = chsh(grid);
  out.s_exp = report.s;

  const double bound = std::sqrt(out.diagonal[0] * out.diagonal[3]);
  double pinned;
  if (clamp_to_bound) {
    pinned = antidiagonal_from_chsh(out.diagonal, report.s, grid.target,
                                    std::numeric_limits<double>::infinity());
    if (std::abs(pinned) > bound) {
      pinned = std::copysign(bound, pinned);
      out.antidiag_clamped = true;
    }
  } else {
    pinned = antidiagonal_from_chsh(out.diagonal, report.s, grid.target);
  }
  out.antidiag_re_pinned = pinned;

  const double cs_extreme = std::copysign(bound, pinned == 0.0 ? 1.0 : pinned);
  out.antidiag_re_lower = std::min(pinned, cs_extreme);
  out.antidiag_re_upper = std::max(pinned, cs_extreme);

  out.offdiag_upper = cauchy_schwarz_bounds(out.diagonal);
  const auto [lower, upper] = purity_range(out);
  out.purity_lower = lower;
  out.purity_upper = upper;
  return out;
}

}  // namespace sagbell
