#include "ctisim/sweep.h"

namespace ctisim {

std::vector<DbaMode>
ModesFor(ModeSelection selection)
{
    switch (selection)
    {
    case ModeSelection::Baseline:
        return {DbaMode::Baseline};
    case ModeSelection::Cti:
        return {DbaMode::Cooperative};
    case ModeSelection::Both:
        break;
    }
    return {DbaMode::Baseline, DbaMode::Cooperative};
}

std::vector<RunSpec>
BuildSweep(const Scenario& base, const SweepSpec& sweep, ModeSelection modes)
{
    if (sweep.fractions.empty())
    {
        throw ConfigError("sweep.fractions", "at least one load fraction required");
    }
    std::vector<RunSpec> runs;
    std::uint32_t id = 0;
    for (const auto& fraction : sweep.fractions)
    {
        if (fraction.IsZero())
        {
            throw ConfigError("sweep.fractions", "fractions must be positive");
        }
        for (DbaMode mode : ModesFor(modes))
        {
            RunSpec run{id++, mode, fraction, base};
            run.scenario.traffic.backgroundFraction = fraction;
            run.scenario.sweep.fractions = {fraction};
            run.scenario.mode = mode == DbaMode::Baseline ? ModeSelection::Baseline : ModeSelection::Cti;
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

} // namespace ctisim
