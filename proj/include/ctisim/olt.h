// OLT upstream scheduling state: latest DBRu per Alloc-ID, grants already
// committed to maps but not yet transmitted, and (in cooperative mode) the
// pending CTI forecasts.

#ifndef CTISIM_OLT_H
#define CTISIM_OLT_H

#include "ctisim/bw-map.h"
#include "ctisim/cti.h"
#include "ctisim/dba.h"
#include "ctisim/onu.h"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace ctisim {

enum class DbaMode
{
    Baseline,
    Cooperative,
};

const char* ToString(DbaMode mode);

struct OltCounters
{
    std::uint64_t forecastsReceived{0};
    std::uint64_t forecastsPlaced{0};
    std::uint64_t forecastDeferrals{0};
    std::uint64_t staleForecasts{0};
    std::uint64_t reports{0};
};

class Olt
{
  public:
    Olt(std::uint32_t oltId, DbaMode mode, DbaConfig config, std::vector<AllocRegistration> allocs);

    std::uint32_t Id() const { return m_id; }
    DbaMode Mode() const { return m_mode; }
    bool Serves(AllocId id) const { return m_dba.Baseline().IsRegistered(id); }

    void OnReport(const DbruReport& report);

    /// Forecasts for a frame whose map is already built are stale and
    /// dropped; the baseline path picks those bytes up from DBRu.
    void OnForecast(const CtiMessage& msg);

    /// Reported occupancy net of grants already committed after the
    /// report was sampled.
    DemandMap CurrentDemand() const;

    /// Unconstrained consumption of the next map, for the cascade master.
    std::uint64_t Need(std::uint64_t frameIndex) const;

    BwMap BuildFrame(std::uint64_t frameIndex, std::uint32_t capacityBytes, SimTime broadcastAt);

    const OltCounters& Counters() const { return m_counters; }
    std::size_t PendingForecasts() const { return m_pending.size(); }

  private:
    struct Committed
    {
        SimTime txTime;
        std::uint32_t bytes;
    };

    std::uint64_t ArrivalFrame(const CtiMessage& msg) const;
    std::vector<PendingForecast> DueForecasts(std::uint64_t frameIndex) const;

    std::uint32_t m_id;
    DbaMode m_mode;
    CooperativeDba m_dba;
    std::map<AllocId, DbruReport> m_reports;
    std::map<AllocId, std::deque<Committed>> m_committed;
    std::vector<PendingForecast> m_pending;
    std::uint64_t m_nextOrder{0};
    std::optional<std::uint64_t> m_lastBuilt;
    OltCounters m_counters;
};

} // namespace ctisim

#endif
