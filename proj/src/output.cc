#include "ctisim/output.h"

#include "ctisim/simulation.h"

#include <cstdio>
#include <map>
#include <sstream>

namespace ctisim {

namespace {

std::string
TimeField(SimTime t)
{
    return t == kUnsetTime ? "null" : std::to_string(t.Ns());
}

std::string
Field(const std::optional<std::uint64_t>& v)
{
    return v ? std::to_string(*v) : "null";
}

std::string
Field(const std::optional<double>& v)
{
    if (!v)
    {
        return "null";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return buf;
}

std::string
Fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

void
WritePacketsHeader(std::ostream& os)
{
    os << "run_id,flow_id,size_bytes,created_ns,enqueued_ns,first_grant_ns,delivered_ns,dropped\n";
}

void
WritePacketRows(std::ostream& os, std::uint32_t runId, const MetricsLedger& ledger, PacketTrace trace)
{
    if (trace == PacketTrace::None)
    {
        return;
    }
    const auto& flows = ledger.Flows();
    std::string line;
    for (const auto& rec : ledger.Records())
    {
        if (trace == PacketTrace::Fronthaul && flows[rec.flow].name != kFronthaulFlow)
        {
            continue;
        }
        line.clear();
        line += std::to_string(runId);
        line += ',';
        line += std::to_string(rec.flow);
        line += ',';
        line += std::to_string(rec.sizeBytes);
        line += ',';
        line += std::to_string(rec.createdAt.Ns());
        line += ',';
        line += std::to_string(rec.enqueuedAtOnu.Ns());
        line += ',';
        line += TimeField(rec.firstGrantAt);
        line += ',';
        line += TimeField(rec.deliveredAtOlt);
        line += rec.dropped ? ",1\n" : ",0\n";
        os << line;
    }
}

void
WriteFlowsHeader(std::ostream& os)
{
    os << "run_id,mode,sweep_fraction,flow_id,delivered_bytes,dropped_bytes,throughput_bps,"
          "lat_mean_ns,lat_p50_ns,lat_p95_ns,lat_p99_ns,dbru_opp_mean_ns,dbru_opp_p50_ns\n";
}

void
WriteFlowRows(std::ostream& os, const RunStatistics& stats)
{
    const RunSummary& s = stats.summary;
    for (const auto& f : stats.flows)
    {
        os << s.runId << ',' << s.mode << ',' << s.sweepFraction.ToString() << ',' << f.flowId << ','
           << f.deliveredBytes << ',' << f.droppedBytes << ',' << f.throughputBps << ',' << Field(f.latencyMeanNs)
           << ',' << Field(f.latencyP50Ns) << ',' << Field(f.latencyP95Ns) << ',' << Field(f.latencyP99Ns) << ','
           << Field(f.dbruOpportunityMeanNs) << ',' << Field(f.dbruOpportunityP50Ns) << '\n';
    }
}

void
WriteSummaryHeader(std::ostream& os)
{
    os << "run_id,mode,sweep_fraction,seed,capacity_bytes_per_frame,wasted_grant_bytes,forecast_deferrals,"
          "stale_forecasts,mapping_misses\n";
}

void
WriteSummaryRow(std::ostream& os, const RunSummary& s)
{
    os << s.runId << ',' << s.mode << ',' << s.sweepFraction.ToString() << ',' << s.seed << ','
       << s.capacityBytesPerFrame << ',' << s.wastedGrantBytes << ',' << s.forecastDeferrals << ','
       << s.staleForecasts << ',' << s.mappingMisses << '\n';
}

std::string
ComparisonTable(const std::vector<RunStatistics>& runs)
{
    struct Row
    {
        const FlowStats* baseline{nullptr};
        const FlowStats* cti{nullptr};
    };
    std::map<Ratio, Row> rows;
    for (const auto& run : runs)
    {
        Row& row = rows[run.summary.sweepFraction];
        const FlowStats* fh = run.Flow(kFronthaulFlow);
        (run.summary.mode == "baseline" ? row.baseline : row.cti) = fh;
    }

    auto mbps = [](const FlowStats* f, bool offered) {
        if (!f)
        {
            return std::string("-");
        }
        return Fixed(static_cast<double>(offered ? f->offeredBps : f->throughputBps) / 1e6, 1);
    };
    auto latUs = [](const FlowStats* f) {
        if (!f || !f->latencyMeanNs)
        {
            return std::string("-");
        }
        return Fixed(*f->latencyMeanNs / 1e3, 1);
    };

    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-10s %14s %16s %16s %14s %14s\n", "background", "offered_mbps",
                  "baseline_mbps", "cti_mbps", "baseline_us", "cti_us");
    os << buf;
    for (const auto& [fraction, row] : rows)
    {
        const FlowStats* any = row.baseline ? row.baseline : row.cti;
        std::snprintf(buf, sizeof buf, "%-10s %14s %16s %16s %14s %14s\n", fraction.ToString().c_str(),
                      mbps(any, true).c_str(), mbps(row.baseline, false).c_str(), mbps(row.cti, false).c_str(),
                      latUs(row.baseline).c_str(), latUs(row.cti).c_str());
        os << buf;
    }
    return os.str();
}

} // namespace ctisim
