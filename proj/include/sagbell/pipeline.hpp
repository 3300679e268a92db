#pragma once

#include <cstdint>
#include <string>

#include "sagbell/io.hpp"

namespace sagbell {

struct ReproduceOptions {
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  bool quiet = false;
};

/// Published interferometer parameters used as simulation defaults.
SimulationConfig paper_config();

/// End-to-end chain: simulate pair and singles sweeps, fit every channel,
/// fit the visibility curve, run the CHSH tests at the three measurement
/// points, run the bounded tomography, and write all artifacts plus a
/// summary.json comparing derived quantities against the published values.
/// Returns the summary. Output is a pure function of the seed.
Json reproduce_paper(const ReproduceOptions& options);

}  // namespace sagbell
