#include "sagbell/bell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sagbell {

ChshSettings canonical_settings(BellTarget target) {
  constexpr double pi = std::numbers::pi;
  ChshSettings s;
  s.alice_a = 0.0;
  s.alice_a_prime = -pi / 4.0;
  s.target = target;
  if (target == BellTarget::phi_minus) {
    s.bob_b = pi / 8.0;
    s.bob_b_prime = 3.0 * pi / 8.0;
  } else {
    s.bob_b = -pi / 8.0;
    s.bob_b_prime = -3.0 * pi / 8.0;
  }
  return s;
}

Correlation correlation(double c_ab, double c_abarbbar, double c_abbar, double c_abarb) {
  for (double c : {c_ab, c_abarbbar, c_abbar, c_abarb})
    if (c < 0.0) throw std::invalid_argument("counts must be non-negative");
  const double total = c_ab + c_abarbbar + c_abbar + c_abarb;
  if (total <= 0.0) throw std::domain_error("correlation undefined: zero total count");

  const double e = (c_ab + c_abarbbar - c_abbar - c_abarb) / total;
  // Gaussian propagation of E = P/N with sigma_C = sqrt(C), floored at 1:
  // dE/dC = (1 -/+ E)/N for counts entering P with +/-.
  auto var = [](double c) { return c < 1.0 ? 1.0 : c; };
  const double plus = (1.0 - e) * (1.0 - e) * (var(c_ab) + var(c_abarbbar));
  const double minus = (1.0 + e) * (1.0 + e) * (var(c_abbar) + var(c_abarb));
  return {e, std::sqrt(plus + minus) / total};
}

namespace {

Correlation block_correlation(const ChshCountGrid& grid, int ai, int bj, const char* label) {
  // The block for E(x, y) spans rows {x, x_perp} and columns {y, y_perp}.
  const auto& c = grid.counts;
  try {
    return correlation(c[ai][bj], c[ai + 1][bj + 1], c[ai][bj + 1], c[ai + 1][bj]);
  } catch (const std::domain_error&) {
    throw std::domain_error(std::string("correlation undefined for setting pair ") + label);
  }
}

}  // namespace

ChshReport chsh(const ChshCountGrid& grid, const ChshSettings& settings) {
  const auto expected_alice = settings.alice_angles();
  const auto expected_bob = settings.bob_angles();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(expected_alice[i] - grid.alice_angles[i]) > 1e-9 ||
        std::abs(expected_bob[i] - grid.bob_angles[i]) > 1e-9)
      throw std::invalid_argument("settings do not match the angles stored in the grid");
  }
  return chsh(grid);
}

ChshReport chsh(const ChshCountGrid& grid) {
  ChshReport report;
  report.correlations[0] = block_correlation(grid, 0, 0, "(a, b)");
  report.correlations[1] = block_correlation(grid, 0, 2, "(a, b')");
  report.correlations[2] = block_correlation(grid, 2, 0, "(a', b)");
  report.correlations[3] = block_correlation(grid, 2, 2, "(a', b')");

  const double e1 = report.correlations[0].value;
  const double e2 = report.correlations[1].value;
  const double e3 = report.correlations[2].value;
  const double e4 = report.correlations[3].value;
  report.s = std::abs(e1 - e2) + std::abs(e3 + e4);

  double var = 0.0;
  for (const auto& corr : report.correlations) var += corr.sigma * corr.sigma;
  report.sigma_s = std::sqrt(var);
  report.standard_deviations_above_2 =
      report.sigma_s > 0.0 ? (report.s - 2.0) / report.sigma_s : 0.0;
  return report;
}

}  // namespace sagbell
