// OLT upstream schedulers.
//
// BaselineDba is status-reporting DBA: grants follow the occupancy the ONUs
// reported in DBRu, every registered Alloc-ID is polled at least once per
// polling period, and an oversubscribed frame is split in proportion to
// demand.  CooperativeDba first places grants forecast by the CTI at the
// offsets where the fronthaul bytes are expected, then runs the baseline
// rule over whatever capacity is left.

#ifndef CTISIM_DBA_H
#define CTISIM_DBA_H

#include "ctisim/bw-map.h"
#include "ctisim/cti.h"
#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"

#include <cstdint>
#include <map>
#include <vector>

namespace ctisim {

struct DbaConfig
{
    FrameLayout layout;
    /// Payload of a grant issued only to collect a DBRu.
    std::uint32_t pollGrantBytes{4};
    std::uint32_t pollingPeriodFrames{1};
    std::uint64_t lineRateBps{9953280000ULL};
    SimTime frameDuration{SimTime::Microseconds(125)};
};

struct AllocRegistration
{
    AllocId allocId{0};
    PriorityClass cls{PriorityClass::Background};
};

/// Outstanding demand per Alloc-ID, in bytes.
using DemandMap = std::map<AllocId, std::uint64_t>;

class BaselineDba
{
  public:
    BaselineDba(DbaConfig config, std::vector<AllocRegistration> allocs);

    BwMap Build(std::uint64_t frameIndex, const DemandMap& demand, std::uint32_t capacityBytes);

    /// Same rule, with entries laid out from `cursorBytes` onwards and only
    /// the capacity after it available.
    BwMap BuildFrom(std::uint64_t frameIndex,
                    const DemandMap& demand,
                    std::uint32_t capacityBytes,
                    std::uint32_t cursorBytes);

    /// Bytes the next map would consume with unlimited capacity.
    std::uint64_t Need(std::uint64_t frameIndex, const DemandMap& demand) const;

    const DbaConfig& Config() const { return m_config; }
    const std::vector<AllocRegistration>& Allocs() const { return m_allocs; }
    bool IsRegistered(AllocId id) const;

  private:
    struct Candidate
    {
        std::size_t index;
        std::uint32_t want;
        std::uint32_t grant;
        bool due;
    };

    bool PollDue(std::size_t index, std::uint64_t frameIndex) const;
    std::vector<Candidate> Candidates(std::uint64_t frameIndex, const DemandMap& demand) const;
    std::uint64_t FitTier(std::vector<Candidate>& tier, std::uint64_t budget) const;

    DbaConfig m_config;
    std::vector<AllocRegistration> m_allocs;
    std::vector<std::uint64_t> m_lastPolled;
    std::size_t m_roundRobin{0};
};

struct PendingForecast
{
    CtiMessage msg;
    /// Publish order; forecasts are served oldest first.
    std::uint64_t order{0};
    /// Rolled over from an earlier frame, so its bytes are already waiting.
    bool rolled{false};
};

struct CooperativeBuildResult
{
    BwMap map;
    std::vector<PendingForecast> deferred;
    std::uint32_t deferrals{0};
    std::uint32_t placed{0};
};

class CooperativeDba
{
  public:
    CooperativeDba(DbaConfig config, std::vector<AllocRegistration> allocs);

    /// `forecasts` are those whose expected arrival falls at or before this
    /// frame's upstream window.  Forecasts that do not fit come back in
    /// `deferred`, marked rolled, for the next frame.
    CooperativeBuildResult Build(std::uint64_t frameIndex,
                                 std::vector<PendingForecast> forecasts,
                                 const DemandMap& demand,
                                 std::uint32_t capacityBytes);

    std::uint64_t Need(std::uint64_t frameIndex,
                       const std::vector<PendingForecast>& forecasts,
                       const DemandMap& demand) const;

    BaselineDba& Baseline() { return m_baseline; }
    const BaselineDba& Baseline() const { return m_baseline; }

  private:
    BaselineDba m_baseline;
};

} // namespace ctisim

#endif
