// Frame-by-frame restatement of the status-reporting DBA rule, shared by
// the unit tests and the acceptance run as an oracle for BaselineDba.  It
// assumes the default 64-byte overhead and 32-byte guard.
#ifndef CTISIM_TESTS_BASELINE_ORACLE_H
#define CTISIM_TESTS_BASELINE_ORACLE_H

#include "ctisim/bw-map.h"
#include "ctisim/dba.h"
#include "ctisim/rng.h"

#include <algorithm>
#include <map>
#include <vector>

namespace ctisim::testing {

class OracleDba
{
  public:
    OracleDba(std::vector<AllocRegistration> allocs, std::uint32_t period, std::uint32_t pollGrant)
        : m_allocs(std::move(allocs)),
          m_period(period),
          m_poll(pollGrant)
    {
        std::sort(m_allocs.begin(), m_allocs.end(), [](auto& a, auto& b) { return a.allocId < b.allocId; });
    }

    std::vector<GrantEntry> Frame(std::uint64_t f, const DemandMap& demand, std::uint32_t capacity)
    {
        struct Item
        {
            std::size_t idx;
            std::uint64_t want;
            std::uint64_t grant;
            bool due;
        };
        std::vector<Item> control, other;
        const std::size_t n = m_allocs.size();
        for (std::size_t k = 0; k < n; ++k)
        {
            std::size_t i = (m_rr + k) % n;
            AllocId id = m_allocs[i].allocId;
            std::uint64_t d = demand.count(id) ? demand.at(id) : 0;
            bool due = !m_last.count(id) || f - m_last[id] >= m_period;
            if (d == 0 && !due)
            {
                continue;
            }
            std::uint64_t want = m_poll;
            if (d > 0)
            {
                want = std::max<std::uint64_t>((d + 3) / 4 * 4, m_poll);
            }
            (m_allocs[i].cls == PriorityClass::Control ? control : other).push_back(Item{i, want, 0, due});
        }

        auto fit = [&](std::vector<Item>& tier, std::uint64_t budget) -> std::uint64_t {
            std::uint64_t full = 0;
            for (auto& it : tier)
            {
                full += 96 + it.want;
            }
            if (full <= budget)
            {
                for (auto& it : tier)
                {
                    it.grant = it.want;
                }
                return full;
            }
            auto base = [](const Item& it) { return std::min<std::uint64_t>(it.want, 4); };
            std::size_t keep = 0;
            for (std::size_t k = tier.size(); k > 0; --k)
            {
                std::uint64_t cost = 0;
                for (std::size_t j = 0; j < k; ++j)
                {
                    cost += 96 + base(tier[j]);
                }
                if (cost <= budget)
                {
                    keep = k;
                    break;
                }
            }
            tier.resize(keep);
            if (tier.empty())
            {
                return 0;
            }
            std::uint64_t dist = budget, wanted = 0;
            for (auto& it : tier)
            {
                dist -= 96 + base(it);
                wanted += it.want - base(it);
            }
            std::uint64_t given = 0;
            for (auto& it : tier)
            {
                std::uint64_t x = 0;
                if (wanted > 0)
                {
                    while ((x + 4) * wanted <= dist * (it.want - base(it)))
                    {
                        x += 4;
                    }
                }
                it.grant = base(it) + x;
                given += x;
            }
            std::uint64_t left = (dist - given) / 4 * 4;
            std::vector<Item*> byId;
            for (auto& it : tier)
            {
                byId.push_back(&it);
            }
            std::sort(byId.begin(), byId.end(), [&](Item* a, Item* b) {
                return m_allocs[a->idx].allocId < m_allocs[b->idx].allocId;
            });
            for (Item* it : byId)
            {
                while (left >= 4 && it->grant + 4 <= it->want)
                {
                    it->grant += 4;
                    left -= 4;
                }
            }
            std::uint64_t used = 0;
            for (auto& it : tier)
            {
                used += 96 + it.grant;
            }
            return used;
        };

        std::uint64_t budget = capacity;
        budget -= fit(control, budget);
        fit(other, budget);

        std::vector<GrantEntry> out;
        std::uint64_t pos = 0;
        for (auto* tier : {&control, &other})
        {
            for (auto& it : *tier)
            {
                AllocId id = m_allocs[it.idx].allocId;
                out.push_back(GrantEntry{id, static_cast<std::uint32_t>(pos + 64), static_cast<std::uint32_t>(it.grant), it.due});
                pos += 96 + it.grant;
                if (it.due)
                {
                    m_last[id] = f;
                }
            }
        }
        m_rr = (m_rr + 1) % n;
        return out;
    }

  private:
    std::vector<AllocRegistration> m_allocs;
    std::uint32_t m_period;
    std::uint32_t m_poll;
    std::map<AllocId, std::uint64_t> m_last;
    std::size_t m_rr{0};
};

/// Runs BaselineDba against the oracle on seeded instances with up to three
/// TCONTs and ten frames, occupancies drawn from a fixed grid.  Returns the
/// number of frames compared and sets `mismatches`.
inline int
CompareWithOracle(std::uint64_t seed, int trials, int& mismatches)
{
    const std::uint64_t grid[] = {0, 1, 3, 4, 5, 1499, 1500, 10000, 50001, 77760, 100000, 155520, 400000};
    RngStream rng(RngState{seed, 0});
    int frames = 0;
    mismatches = 0;
    for (int trial = 0; trial < trials; ++trial)
    {
        std::size_t n = 1 + rng.NextU64() % 3;
        std::vector<AllocRegistration> regs;
        for (std::size_t i = 0; i < n; ++i)
        {
            auto cls = static_cast<PriorityClass>(rng.NextU64() % 3);
            regs.push_back({static_cast<AllocId>(100 + 7 * i + rng.NextU64() % 5), cls});
        }
        std::uint32_t period = 1 + rng.NextU64() % 3;
        std::uint32_t capacity = (rng.NextU64() % 2) ? 155520 : 400 + 4 * (rng.NextU64() % 200);
        DbaConfig cfg;
        cfg.pollingPeriodFrames = period;
        BaselineDba dba(cfg, regs);
        OracleDba oracle(regs, period, cfg.pollGrantBytes);
        std::size_t count = 1 + rng.NextU64() % 10;
        for (std::uint64_t f = 1; f <= count; ++f)
        {
            DemandMap demand;
            for (const auto& r : regs)
            {
                std::uint64_t d = grid[rng.NextU64() % std::size(grid)];
                if (d > 0)
                {
                    demand[r.allocId] = d;
                }
            }
            BwMap m = dba.Build(f, demand, capacity);
            if (m.entries != oracle.Frame(f, demand, capacity) || !ValidateBwMap(m, capacity, cfg.layout).empty())
            {
                ++mismatches;
            }
            ++frames;
        }
    }
    return frames;
}

} // namespace ctisim::testing

#endif
