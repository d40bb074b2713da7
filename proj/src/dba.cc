#include "ctisim/dba.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ctisim {

namespace {

constexpr std::uint64_t kNeverPolled = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint32_t kWord = 4;

} // namespace

BaselineDba::BaselineDba(DbaConfig config, std::vector<AllocRegistration> allocs)
    : m_config(config),
      m_allocs(std::move(allocs))
{
    if (m_config.pollingPeriodFrames == 0)
    {
        throw std::invalid_argument("polling period must be at least one frame");
    }
    if (m_config.pollGrantBytes == 0)
    {
        throw std::invalid_argument("poll grant must be positive");
    }
    std::sort(m_allocs.begin(), m_allocs.end(), [](const auto& a, const auto& b) {
        return a.allocId < b.allocId;
    });
    for (std::size_t i = 1; i < m_allocs.size(); ++i)
    {
        if (m_allocs[i].allocId == m_allocs[i - 1].allocId)
        {
            throw std::invalid_argument("duplicate alloc id " + std::to_string(m_allocs[i].allocId));
        }
    }
    m_lastPolled.assign(m_allocs.size(), kNeverPolled);
}

bool
BaselineDba::IsRegistered(AllocId id) const
{
    return std::binary_search(m_allocs.begin(), m_allocs.end(), AllocRegistration{id, {}},
                              [](const auto& a, const auto& b) { return a.allocId < b.allocId; });
}

bool
BaselineDba::PollDue(std::size_t index, std::uint64_t frameIndex) const
{
    std::uint64_t last = m_lastPolled[index];
    return last == kNeverPolled || frameIndex - last >= m_config.pollingPeriodFrames;
}

std::vector<BaselineDba::Candidate>
BaselineDba::Candidates(std::uint64_t frameIndex, const DemandMap& demand) const
{
    // Placement order: round robin over registrations starting at the
    // rotating pointer.
    std::vector<Candidate> out;
    const std::size_t n = m_allocs.size();
    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t i = (m_roundRobin + k) % n;
        auto it = demand.find(m_allocs[i].allocId);
        std::uint64_t d = it == demand.end() ? 0 : it->second;
        bool due = PollDue(i, frameIndex);
        if (d == 0 && !due)
        {
            continue;
        }
        std::uint64_t want = d > 0 ? std::max<std::uint64_t>(RoundUpToWord(d), m_config.pollGrantBytes)
                                   : m_config.pollGrantBytes;
        want = std::min<std::uint64_t>(want, std::numeric_limits<std::uint32_t>::max() & ~3U);
        out.push_back(Candidate{i, static_cast<std::uint32_t>(want), 0, due});
    }
    return out;
}

std::uint64_t
BaselineDba::FitTier(std::vector<Candidate>& tier, std::uint64_t budget) const
{
    const std::uint64_t fixed = m_config.layout.burstOverheadBytes + m_config.layout.guardBytes;
    std::uint64_t full = 0;
    for (const auto& c : tier)
    {
        full += fixed + c.want;
    }
    if (full <= budget)
    {
        for (auto& c : tier)
        {
            c.grant = c.want;
        }
        return full;
    }

    // Every entry is guaranteed a base of one word (or its whole want if
    // smaller); drop entries from the back of the placement order until the
    // bases fit.
    auto base = [](const Candidate& c) { return std::min(c.want, kWord); };
    while (!tier.empty())
    {
        std::uint64_t floorCost = 0;
        for (const auto& c : tier)
        {
            floorCost += fixed + base(c);
        }
        if (floorCost <= budget)
        {
            break;
        }
        tier.pop_back();
    }
    if (tier.empty())
    {
        return 0;
    }

    std::uint64_t distributable = budget;
    std::uint64_t extraWanted = 0;
    for (const auto& c : tier)
    {
        distributable -= fixed + base(c);
        extraWanted += c.want - base(c);
    }

    std::uint64_t assigned = 0;
    for (auto& c : tier)
    {
        std::uint64_t extra = 0;
        if (extraWanted > 0)
        {
            unsigned __int128 p = static_cast<unsigned __int128>(distributable) * (c.want - base(c));
            extra = RoundDownToWord(static_cast<std::uint64_t>(p / extraWanted));
        }
        c.grant = base(c) + static_cast<std::uint32_t>(extra);
        assigned += extra;
    }

    // Word-rounded leftover goes to the lowest Alloc-ID first.
    std::uint64_t leftover = RoundDownToWord(distributable - assigned);
    std::vector<Candidate*> byId;
    for (auto& c : tier)
    {
        byId.push_back(&c);
    }
    std::sort(byId.begin(), byId.end(), [this](const Candidate* a, const Candidate* b) {
        return m_allocs[a->index].allocId < m_allocs[b->index].allocId;
    });
    for (Candidate* c : byId)
    {
        if (leftover == 0)
        {
            break;
        }
        std::uint64_t room = c->want - c->grant;
        std::uint64_t give = std::min(room, leftover);
        c->grant += static_cast<std::uint32_t>(give);
        leftover -= give;
    }

    std::uint64_t used = 0;
    for (const auto& c : tier)
    {
        used += fixed + c.grant;
    }
    return used;
}

BwMap
BaselineDba::Build(std::uint64_t frameIndex, const DemandMap& demand, std::uint32_t capacityBytes)
{
    return BuildFrom(frameIndex, demand, capacityBytes, 0);
}

BwMap
BaselineDba::BuildFrom(std::uint64_t frameIndex,
                       const DemandMap& demand,
                       std::uint32_t capacityBytes,
                       std::uint32_t cursorBytes)
{
    BwMap map;
    map.frameIndex = frameIndex;

    std::vector<Candidate> all = Candidates(frameIndex, demand);
    std::vector<Candidate> control;
    std::vector<Candidate> others;
    for (const auto& c : all)
    {
        (m_allocs[c.index].cls == PriorityClass::Control ? control : others).push_back(c);
    }

    std::uint64_t budget = capacityBytes > cursorBytes ? capacityBytes - cursorBytes : 0;
    budget -= FitTier(control, budget);
    FitTier(others, budget);

    std::uint64_t cursor = cursorBytes;
    auto place = [&](const std::vector<Candidate>& tier) {
        for (const auto& c : tier)
        {
            std::uint64_t start = cursor + m_config.layout.burstOverheadBytes;
            map.entries.push_back(GrantEntry{m_allocs[c.index].allocId, static_cast<std::uint32_t>(start), c.grant, c.due});
            cursor = start + c.grant + m_config.layout.guardBytes;
            if (c.due)
            {
                m_lastPolled[c.index] = frameIndex;
            }
        }
    };
    place(control);
    place(others);

    if (!m_allocs.empty())
    {
        m_roundRobin = (m_roundRobin + 1) % m_allocs.size();
    }
    return map;
}

std::uint64_t
BaselineDba::Need(std::uint64_t frameIndex, const DemandMap& demand) const
{
    std::uint64_t total = 0;
    for (const auto& c : Candidates(frameIndex, demand))
    {
        total += m_config.layout.EntryCost(c.want);
    }
    return total;
}

CooperativeDba::CooperativeDba(DbaConfig config, std::vector<AllocRegistration> allocs)
    : m_baseline(config, std::move(allocs))
{
}

CooperativeBuildResult
CooperativeDba::Build(std::uint64_t frameIndex,
                      std::vector<PendingForecast> forecasts,
                      const DemandMap& demand,
                      std::uint32_t capacityBytes)
{
    const DbaConfig& cfg = m_baseline.Config();
    const SimTime frameStart = cfg.frameDuration * frameIndex;
    CooperativeBuildResult result;
    result.map.frameIndex = frameIndex;

    std::stable_sort(forecasts.begin(), forecasts.end(), [](const auto& a, const auto& b) {
        return a.order < b.order;
    });

    std::uint64_t cursor = 0;
    bool blocked = false;
    for (auto& f : forecasts)
    {
        std::uint64_t grant = RoundUpToWord(std::max<std::uint64_t>(f.msg.expectedBytes, 1));
        if (cfg.layout.EntryCost(0) + grant > capacityBytes)
        {
            // Could never fit in any frame; the baseline path serves it.
            ++result.deferrals;
            continue;
        }
        std::uint64_t arrivalOffset = 0;
        if (!f.rolled && f.msg.expectedArrival > frameStart)
        {
            arrivalOffset = RoundUpToWord(TimeToBytesCeil(f.msg.expectedArrival - frameStart, cfg.lineRateBps));
        }
        std::uint64_t start = std::max<std::uint64_t>(cursor + cfg.layout.burstOverheadBytes, arrivalOffset);
        std::uint64_t end = start + grant + cfg.layout.guardBytes;
        if (blocked || end > capacityBytes)
        {
            blocked = true;
            f.rolled = true;
            result.deferred.push_back(f);
            ++result.deferrals;
            continue;
        }
        result.map.entries.push_back(GrantEntry{f.msg.allocId, static_cast<std::uint32_t>(start),
                                                static_cast<std::uint32_t>(grant), false});
        cursor = end;
        ++result.placed;
    }

    BwMap rest = m_baseline.BuildFrom(frameIndex, demand, capacityBytes, static_cast<std::uint32_t>(cursor));
    result.map.entries.insert(result.map.entries.end(), rest.entries.begin(), rest.entries.end());
    return result;
}

std::uint64_t
CooperativeDba::Need(std::uint64_t frameIndex,
                     const std::vector<PendingForecast>& forecasts,
                     const DemandMap& demand) const
{
    const FrameLayout& layout = m_baseline.Config().layout;
    std::uint64_t total = m_baseline.Need(frameIndex, demand);
    for (const auto& f : forecasts)
    {
        total += layout.EntryCost(RoundUpToWord(std::max<std::uint64_t>(f.msg.expectedBytes, 1)));
    }
    return total;
}

} // namespace ctisim
