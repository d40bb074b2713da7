// Expansion of a base scenario into the runs of a load sweep.
#ifndef CTISIM_SWEEP_H
#define CTISIM_SWEEP_H

#include "ctisim/olt.h"
#include "ctisim/scenario.h"

#include <cstdint>
#include <vector>

namespace ctisim {

struct RunSpec
{
    std::uint32_t runId{0};
    DbaMode mode{DbaMode::Baseline};
    Ratio fraction;
    /// The base scenario with the background fraction set to `fraction`.
    Scenario scenario;
};

std::vector<DbaMode> ModesFor(ModeSelection selection);

/// One run per fraction and mode, fraction-major, baseline first.  Runs at
/// the same fraction share the seed.  Throws ConfigError on an empty sweep.
std::vector<RunSpec> BuildSweep(const Scenario& base, const SweepSpec& sweep, ModeSelection modes);

} // namespace ctisim

#endif
