// Cooperative Transport Interface: MAC uplink grants become PON grant
// forecasts, carried to the OLT over a publish/subscribe bus with a fixed
// delivery latency and optional seeded loss.

#ifndef CTISIM_CTI_H
#define CTISIM_CTI_H

#include "ctisim/mac-scheduler.h"
#include "ctisim/ratio.h"
#include "ctisim/rng.h"
#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

namespace ctisim {

struct CtiMessage
{
    AllocId allocId{0};
    SimTime expectedArrival;
    std::uint64_t expectedBytes{0};
    UlGrant originGrant;
    SimTime publishedAt;
};

struct BusConfig
{
    SimTime deliveryLatency{SimTime::Microseconds(50)};
    Ratio lossProbability;
};

/// UE -> RU -> Alloc-ID of the TCONT the RU's ONU uses for fronthaul.
struct RuMap
{
    std::map<std::uint32_t, std::uint32_t> ueToRu;
    std::map<std::uint32_t, AllocId> ruToAlloc;

    std::optional<AllocId> AllocFor(std::uint32_t ueId) const;
};

/// Pure translation.  The message is published at the grant's issue time;
/// nullopt when the UE's RU has no alloc mapping.
std::optional<CtiMessage> TranslateUlGrant(const UlGrant& grant, const RuMap& ruMap, const SlotConfig& slots);

/// Counts the grants that could not be translated.
class CtiTranslator
{
  public:
    CtiTranslator(RuMap ruMap, SlotConfig slots);

    std::optional<CtiMessage> Translate(const UlGrant& grant);
    std::uint64_t MappingMisses() const { return m_misses; }

  private:
    RuMap m_ruMap;
    SlotConfig m_slots;
    std::uint64_t m_misses{0};
};

struct CtiTraceRow
{
    std::uint64_t publishedAtNs{0};
    AllocId allocId{0};
    std::uint64_t expectedArrivalNs{0};
    std::uint64_t expectedBytes{0};
    bool delivered{false};
};

class CtiBus
{
  public:
    CtiBus(BusConfig config, RngStream rng);

    /// Returns the OLT delivery time, or nullopt if the bus drops it.
    std::optional<SimTime> Publish(const CtiMessage& msg);

    const BusConfig& Config() const { return m_config; }
    const std::vector<CtiTraceRow>& Trace() const { return m_trace; }
    std::uint64_t Published() const { return m_trace.size(); }
    std::uint64_t Lost() const { return m_lost; }

  private:
    BusConfig m_config;
    RngStream m_rng;
    std::uint64_t m_lossThreshold{0};
    bool m_alwaysLose{false};
    std::vector<CtiTraceRow> m_trace;
    std::uint64_t m_lost{0};
};

/// published_at_ns,alloc_id,expected_arrival_ns,expected_bytes,delivered
void WriteCtiTrace(std::ostream& os, const std::vector<CtiTraceRow>& rows);

} // namespace ctisim

#endif
