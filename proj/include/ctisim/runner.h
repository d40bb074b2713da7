// Command-line orchestration: scenario loading, flag overrides, the sweep
// loop and output files.
#ifndef CTISIM_RUNNER_H
#define CTISIM_RUNNER_H

#include "ctisim/scenario.h"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ctisim {

struct CliOptions
{
    std::optional<std::string> scenarioPath;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> simTimeMs;
    std::optional<std::uint64_t> warmupMs;
    /// "default" or a comma-separated list of fractions.  Without it the
    /// scenario's own sweep.fractions apply.
    std::optional<std::string> sweep;
    std::string outDir{"out"};
};

enum ExitCode : int
{
    kExitOk = 0,
    kExitConfig = 2,
    kExitIo = 3,
    kExitInvariant = 4,
};

/// Loads the scenario and applies the flag overrides.  Throws ConfigError.
Scenario ResolveScenario(const CliOptions& options);

int RunCli(const CliOptions& options, std::ostream& out, std::ostream& err);

} // namespace ctisim

#endif
