#include "ctisim/cascade.h"

#include "ctisim/bw-map.h"

#include <algorithm>
#include <stdexcept>

namespace ctisim {

std::map<std::uint32_t, std::uint32_t>
CascadeAllocate(const OltRole& master,
                std::span<const OltDemandSummary> demands,
                std::uint32_t capacityBytes,
                std::uint32_t minShareBytes)
{
    if (master.role != CascadeRole::Master)
    {
        throw std::logic_error("cascade allocation requested from a slave OLT");
    }
    std::vector<std::uint32_t> members = master.cascadePeers;
    members.push_back(master.oltId);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    std::map<std::uint32_t, std::uint32_t> shares;
    if (members.size() == 1)
    {
        shares[master.oltId] = capacityBytes;
        return shares;
    }
    if (std::uint64_t{minShareBytes} * members.size() > capacityBytes)
    {
        throw std::invalid_argument("cascade floor shares exceed frame capacity");
    }

    std::map<std::uint32_t, std::uint64_t> need;
    for (auto id : members)
    {
        need[id] = 0;
    }
    for (const auto& d : demands)
    {
        auto it = need.find(d.oltId);
        if (it == need.end())
        {
            throw std::invalid_argument("demand from OLT " + std::to_string(d.oltId) + " outside the cascade");
        }
        it->second += d.demandBytes + d.overheadBytes;
    }

    std::uint64_t fitting = 0;
    for (auto id : members)
    {
        fitting += std::max<std::uint64_t>(minShareBytes, need[id]);
    }
    if (fitting <= capacityBytes)
    {
        std::uint64_t slaves = 0;
        for (auto id : members)
        {
            if (id == master.oltId)
            {
                continue;
            }
            auto s = static_cast<std::uint32_t>(std::max<std::uint64_t>(minShareBytes, need[id]));
            shares[id] = s;
            slaves += s;
        }
        shares[master.oltId] = static_cast<std::uint32_t>(capacityBytes - slaves);
        return shares;
    }

    std::uint64_t distributable = capacityBytes - std::uint64_t{minShareBytes} * members.size();
    std::uint64_t totalExcess = 0;
    for (auto id : members)
    {
        totalExcess += need[id] > minShareBytes ? need[id] - minShareBytes : 0;
    }
    std::uint64_t assigned = 0;
    for (auto id : members)
    {
        std::uint64_t excess = need[id] > minShareBytes ? need[id] - minShareBytes : 0;
        unsigned __int128 p = static_cast<unsigned __int128>(distributable) * excess;
        std::uint64_t slice = RoundDownToWord(static_cast<std::uint64_t>(p / totalExcess));
        shares[id] = static_cast<std::uint32_t>(minShareBytes + slice);
        assigned += slice;
    }
    std::uint64_t leftover = RoundDownToWord(distributable - assigned);
    for (auto id : members)
    {
        if (leftover == 0)
        {
            break;
        }
        std::uint64_t room = need[id] > shares[id] ? RoundDownToWord(need[id] - shares[id]) : 0;
        std::uint64_t give = std::min(room, leftover);
        shares[id] += static_cast<std::uint32_t>(give);
        leftover -= give;
    }
    return shares;
}

} // namespace ctisim
