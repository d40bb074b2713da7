#include "ctisim/runner.h"

#include "ctisim/output.h"
#include "ctisim/simulation.h"
#include "ctisim/sweep.h"

#include <filesystem>
#include <fstream>

namespace ctisim {

namespace {

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::ofstream
OpenOutput(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
    {
        throw IoError("cannot write '" + path.string() + "'");
    }
    return os;
}

void
CloseOutput(std::ofstream& os, const std::filesystem::path& path)
{
    os.close();
    if (!os)
    {
        throw IoError("error writing '" + path.string() + "'");
    }
}

void
WriteFile(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os = OpenOutput(path);
    os << text;
    CloseOutput(os, path);
}

} // namespace

Scenario
ResolveScenario(const CliOptions& options)
{
    Scenario s = options.scenarioPath ? LoadScenario(*options.scenarioPath) : Scenario{};
    if (options.mode)
    {
        try
        {
            s.mode = ParseModeSelection(*options.mode);
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError("--mode", e.what());
        }
    }
    if (options.seed)
    {
        s.seed = *options.seed;
    }
    if (options.simTimeMs)
    {
        s.duration = SimTime::Milliseconds(*options.simTimeMs);
    }
    if (options.warmupMs)
    {
        s.warmup = SimTime::Milliseconds(*options.warmupMs);
    }
    if (options.sweep)
    {
        if (*options.sweep == "default")
        {
            s.sweep = SweepSpec::Default();
        }
        else
        {
            try
            {
                s.sweep.fractions = ParseFractionList(*options.sweep);
            }
            catch (const std::invalid_argument& e)
            {
                throw ConfigError("--sweep", e.what());
            }
        }
    }
    ValidateScenario(s);
    return s;
}

int
RunCli(const CliOptions& options, std::ostream& out, std::ostream& err)
{
    namespace fs = std::filesystem;
    try
    {
        Scenario base = ResolveScenario(options);
        std::vector<RunSpec> runs = BuildSweep(base, base.sweep, base.mode);

        const fs::path dir(options.outDir);
        std::error_code ec;
        fs::create_directories(dir / "configs", ec);
        if (ec)
        {
            throw IoError("cannot create '" + (dir / "configs").string() + "': " + ec.message());
        }
        WriteFile(dir / "effective_scenario.cfg", DumpScenario(base));

        const fs::path packetsPath = dir / "packets.csv";
        const fs::path flowsPath = dir / "flows.csv";
        const fs::path summaryPath = dir / "summary.csv";
        std::ofstream packets = OpenOutput(packetsPath);
        std::ofstream flows = OpenOutput(flowsPath);
        std::ofstream summary = OpenOutput(summaryPath);
        WritePacketsHeader(packets);
        WriteFlowsHeader(flows);
        WriteSummaryHeader(summary);

        std::vector<RunStatistics> stats;
        for (const RunSpec& run : runs)
        {
            RunOptions ro;
            ro.runId = run.runId;
            ro.keepLedger = run.scenario.packetTrace != PacketTrace::None;
            RunResult r = RunSimulation(run.scenario, run.mode, ro);

            const std::string id = std::to_string(run.runId);
            WriteFile(dir / "configs" / ("run_" + id + ".cfg"), DumpScenario(run.scenario));
            if (r.ledger)
            {
                WritePacketRows(packets, run.runId, *r.ledger, run.scenario.packetTrace);
            }
            WriteFlowRows(flows, r.stats);
            WriteSummaryRow(summary, r.stats.summary);
            if (run.mode == DbaMode::Cooperative)
            {
                fs::path tracePath = dir / ("cti_trace_run" + id + ".csv");
                std::ofstream trace = OpenOutput(tracePath);
                WriteCtiTrace(trace, r.ctiTrace);
                CloseOutput(trace, tracePath);
            }
            const FlowStats* fh = r.stats.Flow(kFronthaulFlow);
            out << "run " << id << " " << ToString(run.mode) << " background=" << run.fraction.ToString()
                << " fronthaul_mbps=" << (fh ? fh->throughputBps / 1000000 : 0) << "\n";
            stats.push_back(std::move(r.stats));
        }
        CloseOutput(packets, packetsPath);
        CloseOutput(flows, flowsPath);
        CloseOutput(summary, summaryPath);

        std::string table = ComparisonTable(stats);
        WriteFile(dir / "comparison.txt", table);
        out << table;
        return kExitOk;
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const IoError& e)
    {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const InvariantViolation& e)
    {
        err << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    }
}

} // namespace ctisim
