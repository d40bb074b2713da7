// Per-packet ledger and the statistics computed from it.
//
// Latency is the transport leg, ONU ingress to OLT egress.  The dbru
// opportunity time is the wait between ONU ingress and the start of the
// grant that carries the packet.  Percentiles are nearest-rank.

#ifndef CTISIM_METRICS_H
#define CTISIM_METRICS_H

#include "ctisim/ratio.h"
#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctisim {

using FlowId = std::uint16_t;

inline constexpr SimTime kUnsetTime = SimTime::Max();

struct FlowInfo
{
    std::string name;
    PriorityClass cls{PriorityClass::Background};
    AllocId allocId{0};
};

struct PacketRecord
{
    FlowId flow{0};
    bool dropped{false};
    std::uint32_t sizeBytes{0};
    SimTime createdAt;
    SimTime enqueuedAtOnu;
    SimTime firstGrantAt{kUnsetTime};
    SimTime deliveredAtOlt{kUnsetTime};

    bool Granted() const { return firstGrantAt != kUnsetTime; }
    bool Delivered() const { return deliveredAtOlt != kUnsetTime; }
};

/// first_grant_at - enqueued_at_onu; nullopt for dropped or never-granted
/// packets.
std::optional<SimTime> DbruOpportunityTime(const PacketRecord& rec);

struct LedgerCounters
{
    std::uint64_t wastedGrantBytes{0};
    std::uint64_t unregisteredGrants{0};
    std::uint64_t forecastDeferrals{0};
    std::uint64_t staleForecasts{0};
    std::uint64_t mappingMisses{0};
    /// UE arrivals whose enqueue time differed from the closed form.
    std::uint64_t arrivalFormulaMismatches{0};
    /// Forecasts that should have preceded their bytes but did not.
    std::uint64_t lateForecasts{0};
};

class MetricsLedger
{
  public:
    FlowId RegisterFlow(FlowInfo info);

    std::uint32_t RecordEnqueue(FlowId flow, std::uint32_t sizeBytes, SimTime createdAt, SimTime enqueuedAt);
    std::uint32_t RecordDrop(FlowId flow, std::uint32_t sizeBytes, SimTime createdAt, SimTime at);

    /// Both throw std::logic_error if the timestamps would go backwards.
    void MarkGranted(std::uint32_t recordId, SimTime at);
    void MarkDelivered(std::uint32_t recordId, SimTime at);

    const std::vector<FlowInfo>& Flows() const { return m_flows; }
    const std::vector<PacketRecord>& Records() const { return m_records; }
    const PacketRecord& Record(std::uint32_t id) const { return m_records[id]; }

    LedgerCounters& Counters() { return m_counters; }
    const LedgerCounters& Counters() const { return m_counters; }

    void Reserve(std::size_t n) { m_records.reserve(n); }

  private:
    std::vector<FlowInfo> m_flows;
    std::vector<PacketRecord> m_records;
    LedgerCounters m_counters;
};

/// Nearest-rank percentile of an ascending sample: the value at rank
/// ceil(pct/100 * N).  nullopt for an empty sample.
std::optional<std::uint64_t> NearestRank(std::span<const std::uint64_t> sorted, unsigned pct);

struct FlowStats
{
    FlowId flowId{0};
    std::string name;
    PriorityClass cls{PriorityClass::Background};
    /// Bytes offered to the ONU (accepted or dropped) inside the window.
    std::uint64_t offeredBytes{0};
    std::uint64_t deliveredBytes{0};
    std::uint64_t droppedBytes{0};
    std::uint64_t deliveredPackets{0};
    std::uint64_t offeredBps{0};
    std::uint64_t throughputBps{0};
    std::optional<double> latencyMeanNs;
    std::optional<std::uint64_t> latencyP50Ns;
    std::optional<std::uint64_t> latencyP95Ns;
    std::optional<std::uint64_t> latencyP99Ns;
    std::optional<double> dbruOpportunityMeanNs;
    std::optional<std::uint64_t> dbruOpportunityP50Ns;
    /// Grant issue (or creation) to OLT egress, for context.
    std::optional<double> endToEndMeanNs;
};

struct RunSummary
{
    std::uint32_t runId{0};
    std::string mode;
    Ratio sweepFraction;
    std::uint64_t seed{0};
    std::uint32_t capacityBytesPerFrame{0};
    std::uint64_t wastedGrantBytes{0};
    std::uint64_t forecastDeferrals{0};
    std::uint64_t staleForecasts{0};
    std::uint64_t mappingMisses{0};
};

/// Packets enqueued in [windowStart, windowEnd) are measured; they count
/// as delivered when they reach the OLT by the horizon.  Throughput is
/// delivered bytes over the window length.
struct MeasurementWindow
{
    SimTime windowStart;
    SimTime windowEnd;
    SimTime horizon;
};

struct RunStatistics
{
    std::vector<FlowStats> flows;
    RunSummary summary;

    const FlowStats* Flow(const std::string& name) const;
};

RunStatistics Finalize(const MetricsLedger& ledger, const MeasurementWindow& window, RunSummary summary);

struct FlowConservation
{
    std::uint64_t offeredBytes{0};
    std::uint64_t deliveredBytes{0};
    std::uint64_t droppedBytes{0};
    /// Still queued at the ONU or in flight at the horizon.
    std::uint64_t residentBytes{0};

    bool Holds() const { return offeredBytes == deliveredBytes + droppedBytes + residentBytes; }
};

/// Whole-run byte accounting per flow, straight from the ledger.
std::vector<FlowConservation> Conservation(const MetricsLedger& ledger, SimTime horizon);

} // namespace ctisim

#endif
