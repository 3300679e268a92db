#pragma once

#include <array>

#include "sagbell/simulate.hpp"

namespace sagbell {

/// Analyzer angles that maximize the violation for each target state:
/// Alice 0 and -45 deg for both, Bob (22.5, 67.5) deg for phi-minus and
/// (-22.5, -67.5) deg for phi-plus.
ChshSettings canonical_settings(BellTarget target);

struct Correlation {
  double value = 0.0;
  double sigma = 0.0;
};

/// E = (C1 + C2 - C3 - C4) / total for the four outcomes of one setting pair,
/// ordered C(a,b), C(a_perp,b_perp), C(a,b_perp), C(a_perp,b). Count errors
/// are sqrt(C) floored at 1. Throws when the total vanishes.
Correlation correlation(double c_ab, double c_abarbbar, double c_abbar, double c_abarb);

struct ChshReport {
  std::array<Correlation, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
  double s = 0.0;
  double sigma_s = 0.0;
  double standard_deviations_above_2 = 0.0;
};

/// S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|. The four correlations use
/// disjoint cells of the grid, so their errors add in quadrature exactly.
/// The settings must match the angles stored in the grid; an undefined
/// correlation raises an error naming the setting pair.
ChshReport chsh(const ChshCountGrid& grid, const ChshSettings& settings);

/// Same, with the settings taken from the grid itself.
ChshReport chsh(const ChshCountGrid& grid);

}  // namespace sagbell
