#include "ctisim/mac-scheduler.h"

#include <algorithm>
#include <stdexcept>

namespace ctisim {

MacScheduler::MacScheduler(MacConfig config)
    : m_config(config)
{
    if (m_config.maxTbsBytes == 0)
    {
        throw std::invalid_argument("max TBS must be positive");
    }
}

std::vector<UlGrant>
MacScheduler::Schedule(std::uint64_t slot, std::span<const UeDemand> demands, const SlotConfig& slots)
{
    std::vector<const UeDemand*> backlogged;
    for (const auto& d : demands)
    {
        if (d.bufferBytes > 0)
        {
            backlogged.push_back(&d);
        }
    }
    std::vector<UlGrant> grants;
    if (backlogged.empty() || m_config.maxGrantsPerSlot == 0)
    {
        return grants;
    }
    std::sort(backlogged.begin(), backlogged.end(), [](const UeDemand* a, const UeDemand* b) {
        return a->ueId < b->ueId;
    });

    auto first = std::find_if(backlogged.begin(), backlogged.end(), [this](const UeDemand* d) {
        return d->ueId >= m_nextUe;
    });
    std::size_t start = first == backlogged.end() ? 0 : static_cast<std::size_t>(first - backlogged.begin());
    std::size_t count = std::min<std::size_t>(backlogged.size(), m_config.maxGrantsPerSlot);

    for (std::size_t i = 0; i < count; ++i)
    {
        const UeDemand& d = *backlogged[(start + i) % backlogged.size()];
        UlGrant g;
        g.grantId = m_nextGrantId++;
        g.ueId = d.ueId;
        g.issueSlot = slot;
        g.k2Slots = m_config.k2Slots;
        g.tbsBytes = std::min(d.bufferBytes, m_config.maxTbsBytes);
        g.issuedAt = slots.slotDuration * slot;
        grants.push_back(g);
        m_nextUe = d.ueId + 1;
    }
    return grants;
}

SimTime
FronthaulArrivalTime(const UlGrant& grant, const SlotConfig& slots)
{
    return grant.issuedAt + slots.slotDuration * grant.k2Slots + slots.ueProcessingDelay +
           slots.ruProcessingDelay;
}

std::uint64_t
FronthaulBytes(std::uint64_t tbsBytes, const SlotConfig& slots)
{
    return slots.fronthaulOverheadFactor.MulCeil(tbsBytes);
}

std::uint64_t
FronthaulBatch::TotalBytes() const
{
    std::uint64_t total = 0;
    for (auto s : packetSizes)
    {
        total += s;
    }
    return total;
}

FronthaulBatch
UeTransmit(const UlGrant& grant, const SlotConfig& slots, std::uint32_t mtuBytes)
{
    if (mtuBytes == 0)
    {
        throw std::invalid_argument("MTU must be positive");
    }
    FronthaulBatch batch;
    batch.arrival = FronthaulArrivalTime(grant, slots);
    std::uint64_t remaining = FronthaulBytes(grant.tbsBytes, slots);
    batch.packetSizes.reserve(remaining / mtuBytes + 1);
    while (remaining > 0)
    {
        auto chunk = static_cast<std::uint32_t>(std::min<std::uint64_t>(remaining, mtuBytes));
        batch.packetSizes.push_back(chunk);
        remaining -= chunk;
    }
    return batch;
}

} // namespace ctisim
