#include "ctisim/metrics.h"

#include <algorithm>
#include <stdexcept>

namespace ctisim {

std::optional<SimTime>
DbruOpportunityTime(const PacketRecord& rec)
{
    if (rec.dropped || !rec.Granted())
    {
        return std::nullopt;
    }
    return rec.firstGrantAt - rec.enqueuedAtOnu;
}

FlowId
MetricsLedger::RegisterFlow(FlowInfo info)
{
    m_flows.push_back(std::move(info));
    return static_cast<FlowId>(m_flows.size() - 1);
}

std::uint32_t
MetricsLedger::RecordEnqueue(FlowId flow, std::uint32_t sizeBytes, SimTime createdAt, SimTime enqueuedAt)
{
    if (enqueuedAt < createdAt)
    {
        throw std::logic_error("packet enqueued before it was created");
    }
    PacketRecord rec;
    rec.flow = flow;
    rec.sizeBytes = sizeBytes;
    rec.createdAt = createdAt;
    rec.enqueuedAtOnu = enqueuedAt;
    m_records.push_back(rec);
    return static_cast<std::uint32_t>(m_records.size() - 1);
}

std::uint32_t
MetricsLedger::RecordDrop(FlowId flow, std::uint32_t sizeBytes, SimTime createdAt, SimTime at)
{
    std::uint32_t id = RecordEnqueue(flow, sizeBytes, createdAt, at);
    m_records[id].dropped = true;
    return id;
}

void
MetricsLedger::MarkGranted(std::uint32_t recordId, SimTime at)
{
    PacketRecord& rec = m_records.at(recordId);
    if (rec.dropped || rec.Granted() || at < rec.enqueuedAtOnu)
    {
        throw std::logic_error("invalid grant timestamp for packet " + std::to_string(recordId));
    }
    rec.firstGrantAt = at;
}

void
MetricsLedger::MarkDelivered(std::uint32_t recordId, SimTime at)
{
    PacketRecord& rec = m_records.at(recordId);
    if (!rec.Granted() || rec.Delivered() || at < rec.firstGrantAt)
    {
        throw std::logic_error("invalid delivery timestamp for packet " + std::to_string(recordId));
    }
    rec.deliveredAtOlt = at;
}

std::optional<std::uint64_t>
NearestRank(std::span<const std::uint64_t> sorted, unsigned pct)
{
    if (sorted.empty())
    {
        return std::nullopt;
    }
    std::uint64_t n = sorted.size();
    std::uint64_t rank = (pct * n + 99) / 100;
    if (rank == 0)
    {
        rank = 1;
    }
    return sorted[rank - 1];
}

const FlowStats*
RunStatistics::Flow(const std::string& name) const
{
    for (const auto& f : flows)
    {
        if (f.name == name)
        {
            return &f;
        }
    }
    return nullptr;
}

RunStatistics
Finalize(const MetricsLedger& ledger, const MeasurementWindow& window, RunSummary summary)
{
    const std::size_t nFlows = ledger.Flows().size();
    std::vector<std::vector<std::uint64_t>> latency(nFlows);
    std::vector<std::vector<std::uint64_t>> opportunity(nFlows);
    std::vector<long double> endToEnd(nFlows, 0.0L);
    std::vector<FlowStats> stats(nFlows);
    for (std::size_t i = 0; i < nFlows; ++i)
    {
        stats[i].flowId = static_cast<FlowId>(i);
        stats[i].name = ledger.Flows()[i].name;
        stats[i].cls = ledger.Flows()[i].cls;
    }

    for (const auto& rec : ledger.Records())
    {
        if (rec.enqueuedAtOnu < window.windowStart || rec.enqueuedAtOnu >= window.windowEnd)
        {
            continue;
        }
        FlowStats& fs = stats[rec.flow];
        fs.offeredBytes += rec.sizeBytes;
        if (rec.dropped)
        {
            fs.droppedBytes += rec.sizeBytes;
            continue;
        }
        if (!rec.Delivered() || rec.deliveredAtOlt > window.horizon)
        {
            continue;
        }
        fs.deliveredBytes += rec.sizeBytes;
        ++fs.deliveredPackets;
        latency[rec.flow].push_back((rec.deliveredAtOlt - rec.enqueuedAtOnu).Ns());
        opportunity[rec.flow].push_back((rec.firstGrantAt - rec.enqueuedAtOnu).Ns());
        endToEnd[rec.flow] += static_cast<long double>((rec.deliveredAtOlt - rec.createdAt).Ns());
    }

    const std::uint64_t windowNs = (window.windowEnd - window.windowStart).Ns();
    auto bps = [windowNs](std::uint64_t bytes) -> std::uint64_t {
        if (windowNs == 0)
        {
            return 0;
        }
        unsigned __int128 bits = static_cast<unsigned __int128>(bytes) * 8ULL * 1000000000ULL;
        return static_cast<std::uint64_t>(bits / windowNs);
    };
    auto mean = [](const std::vector<std::uint64_t>& v) -> std::optional<double> {
        if (v.empty())
        {
            return std::nullopt;
        }
        long double sum = 0;
        for (auto x : v)
        {
            sum += x;
        }
        return static_cast<double>(sum / v.size());
    };

    for (std::size_t i = 0; i < nFlows; ++i)
    {
        FlowStats& fs = stats[i];
        fs.throughputBps = bps(fs.deliveredBytes);
        fs.offeredBps = bps(fs.offeredBytes);
        std::sort(latency[i].begin(), latency[i].end());
        fs.latencyMeanNs = mean(latency[i]);
        fs.latencyP50Ns = NearestRank(latency[i], 50);
        fs.latencyP95Ns = NearestRank(latency[i], 95);
        fs.latencyP99Ns = NearestRank(latency[i], 99);
        fs.dbruOpportunityMeanNs = mean(opportunity[i]);
        std::sort(opportunity[i].begin(), opportunity[i].end());
        fs.dbruOpportunityP50Ns = NearestRank(opportunity[i], 50);
        if (fs.deliveredPackets > 0)
        {
            fs.endToEndMeanNs = static_cast<double>(endToEnd[i] / fs.deliveredPackets);
        }
    }

    const LedgerCounters& c = ledger.Counters();
    summary.wastedGrantBytes = c.wastedGrantBytes;
    summary.forecastDeferrals = c.forecastDeferrals;
    summary.staleForecasts = c.staleForecasts;
    summary.mappingMisses = c.mappingMisses;
    return RunStatistics{std::move(stats), summary};
}

std::vector<FlowConservation>
Conservation(const MetricsLedger& ledger, SimTime horizon)
{
    std::vector<FlowConservation> out(ledger.Flows().size());
    for (const auto& rec : ledger.Records())
    {
        FlowConservation& fc = out[rec.flow];
        fc.offeredBytes += rec.sizeBytes;
        if (rec.dropped)
        {
            fc.droppedBytes += rec.sizeBytes;
        }
        else if (rec.Delivered() && rec.deliveredAtOlt <= horizon)
        {
            fc.deliveredBytes += rec.sizeBytes;
        }
        else
        {
            fc.residentBytes += rec.sizeBytes;
        }
    }
    return out;
}

} // namespace ctisim
