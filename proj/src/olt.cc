#include "ctisim/olt.h"

#include <algorithm>

namespace ctisim {

const char*
ToString(DbaMode mode)
{
    return mode == DbaMode::Baseline ? "baseline" : "cti";
}

Olt::Olt(std::uint32_t oltId, DbaMode mode, DbaConfig config, std::vector<AllocRegistration> allocs)
    : m_id(oltId),
      m_mode(mode),
      m_dba(config, std::move(allocs))
{
}

void
Olt::OnReport(const DbruReport& report)
{
    ++m_counters.reports;
    auto it = m_reports.find(report.allocId);
    if (it != m_reports.end() && it->second.reportedAt > report.reportedAt)
    {
        return;
    }
    m_reports[report.allocId] = report;
    auto& committed = m_committed[report.allocId];
    while (!committed.empty() && committed.front().txTime <= report.reportedAt)
    {
        committed.pop_front();
    }
}

std::uint64_t
Olt::ArrivalFrame(const CtiMessage& msg) const
{
    return msg.expectedArrival.Ns() / m_dba.Baseline().Config().frameDuration.Ns();
}

void
Olt::OnForecast(const CtiMessage& msg)
{
    ++m_counters.forecastsReceived;
    if (m_mode != DbaMode::Cooperative)
    {
        return;
    }
    if (m_lastBuilt && ArrivalFrame(msg) <= *m_lastBuilt)
    {
        ++m_counters.staleForecasts;
        return;
    }
    m_pending.push_back(PendingForecast{msg, m_nextOrder++, false});
}

DemandMap
Olt::CurrentDemand() const
{
    DemandMap demand;
    for (const auto& [alloc, report] : m_reports)
    {
        std::uint64_t covered = 0;
        auto c = m_committed.find(alloc);
        if (c != m_committed.end())
        {
            for (const auto& g : c->second)
            {
                if (g.txTime > report.reportedAt)
                {
                    covered += g.bytes;
                }
            }
        }
        // Bytes already counted in the report that a rolled forecast will
        // still grant.
        for (const auto& f : m_pending)
        {
            if (f.msg.allocId == alloc && f.msg.expectedArrival <= report.reportedAt)
            {
                covered += RoundUpToWord(f.msg.expectedBytes);
            }
        }
        if (report.occupancyBytes > covered)
        {
            demand[alloc] = report.occupancyBytes - covered;
        }
    }
    return demand;
}

std::vector<PendingForecast>
Olt::DueForecasts(std::uint64_t frameIndex) const
{
    std::vector<PendingForecast> due;
    for (const auto& f : m_pending)
    {
        if (f.rolled || ArrivalFrame(f.msg) <= frameIndex)
        {
            due.push_back(f);
        }
    }
    return due;
}

std::uint64_t
Olt::Need(std::uint64_t frameIndex) const
{
    return m_dba.Need(frameIndex, DueForecasts(frameIndex), CurrentDemand());
}

BwMap
Olt::BuildFrame(std::uint64_t frameIndex, std::uint32_t capacityBytes, SimTime broadcastAt)
{
    DemandMap demand = CurrentDemand();
    BwMap map;
    if (m_mode == DbaMode::Cooperative)
    {
        std::vector<PendingForecast> due = DueForecasts(frameIndex);
        std::erase_if(m_pending, [&](const PendingForecast& f) {
            return f.rolled || ArrivalFrame(f.msg) <= frameIndex;
        });
        CooperativeBuildResult r = m_dba.Build(frameIndex, std::move(due), demand, capacityBytes);
        m_counters.forecastsPlaced += r.placed;
        m_counters.forecastDeferrals += r.deferrals;
        m_pending.insert(m_pending.end(), r.deferred.begin(), r.deferred.end());
        map = std::move(r.map);
    }
    else
    {
        map = m_dba.Baseline().Build(frameIndex, demand, capacityBytes);
    }
    map.broadcastAt = broadcastAt;

    const DbaConfig& cfg = m_dba.Baseline().Config();
    UpstreamTiming timing{cfg.lineRateBps, cfg.frameDuration, SimTime()};
    for (const auto& e : map.entries)
    {
        // A bare polling grant is smaller than any queued packet it would
        // have to carry, so it does not count against reported demand.
        bool pollOnly = e.requestDbru && e.grantBytes == cfg.pollGrantBytes && !demand.count(e.allocId);
        if (!pollOnly)
        {
            m_committed[e.allocId].push_back(Committed{GrantTxTime(frameIndex, e, timing), e.grantBytes});
        }
    }
    m_lastBuilt = frameIndex;
    return map;
}

} // namespace ctisim
