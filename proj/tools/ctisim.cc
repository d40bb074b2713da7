#include "ctisim/runner.h"

#include "CLI11.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
    ctisim::CliOptions opts;
    CLI::App app{"Discrete-event simulator of fronthaul over a PON upstream"};

    std::string scenario, mode, sweep;
    std::uint64_t seed = 0, simTime = 0, warmup = 0;
    auto* scenarioOpt = app.add_option("--scenario", scenario, "Scenario file")->check(CLI::ExistingFile);
    auto* modeOpt = app.add_option("--mode", mode, "baseline, cti or both")
                        ->check(CLI::IsMember({"baseline", "cti", "both"}));
    auto* seedOpt = app.add_option("--seed", seed, "Random seed");
    auto* timeOpt = app.add_option("--sim-time-ms", simTime, "Simulated time per run, ms");
    auto* warmOpt = app.add_option("--warmup-ms", warmup, "Warm-up excluded from statistics, ms");
    auto* sweepOpt = app.add_option("--sweep", sweep, "'default' or a comma-separated list of background fractions");
    app.add_option("--out", opts.outDir, "Output directory")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : ctisim::kExitConfig;
    }

    if (*scenarioOpt)
    {
        opts.scenarioPath = scenario;
    }
    if (*modeOpt)
    {
        opts.mode = mode;
    }
    if (*seedOpt)
    {
        opts.seed = seed;
    }
    if (*timeOpt)
    {
        opts.simTimeMs = simTime;
    }
    if (*warmOpt)
    {
        opts.warmupMs = warmup;
    }
    if (*sweepOpt)
    {
        opts.sweep = sweep;
    }
    return ctisim::RunCli(opts, std::cout, std::cerr);
}
