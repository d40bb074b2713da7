#include "ctisim/onu.h"

namespace ctisim {

DbruReport
GenerateDbru(const TcontQueue& tcont, SimTime now)
{
    return DbruReport{tcont.GetAllocId(), tcont.OccupancyBytes(), now};
}

SimTime
GrantTxTime(std::uint64_t frameIndex, const GrantEntry& entry, const UpstreamTiming& timing)
{
    return timing.frameDuration * frameIndex + BytesToTime(entry.startOffsetBytes, timing.lineRateBps);
}

Burst
ExecuteGrant(std::uint64_t frameIndex, const GrantEntry& entry, TcontQueue* queue, const UpstreamTiming& timing)
{
    Burst burst;
    burst.allocId = entry.allocId;
    burst.txStart = GrantTxTime(frameIndex, entry, timing);
    if (queue == nullptr)
    {
        burst.unregistered = true;
        burst.wastedBytes = entry.grantBytes;
        burst.arrivalAtOlt = burst.txStart + BytesToTime(entry.grantBytes, timing.lineRateBps) + timing.upstreamPropagation;
        return burst;
    }

    std::uint32_t used = 0;
    while (!queue->Empty())
    {
        const Packet& head = queue->Front();
        if (head.enqueuedAt > burst.txStart || used + head.sizeBytes > entry.grantBytes)
        {
            break;
        }
        used += head.sizeBytes;
        Packet p = queue->PopFront();
        burst.sent.push_back(SentPacket{p, burst.txStart + BytesToTime(used, timing.lineRateBps) + timing.upstreamPropagation});
    }
    burst.usedBytes = used;
    burst.wastedBytes = entry.grantBytes - used;
    burst.arrivalAtOlt = burst.txStart + BytesToTime(entry.grantBytes, timing.lineRateBps) + timing.upstreamPropagation;
    if (entry.requestDbru)
    {
        burst.report = GenerateDbru(*queue, burst.txStart);
    }
    return burst;
}

std::vector<Burst>
ExecuteBwMap(const BwMap& map, std::map<AllocId, TcontQueue*>& queues, const UpstreamTiming& timing)
{
    std::vector<Burst> bursts;
    bursts.reserve(map.entries.size());
    for (const auto& e : map.entries)
    {
        auto it = queues.find(e.allocId);
        bursts.push_back(ExecuteGrant(map.frameIndex, e, it == queues.end() ? nullptr : it->second, timing));
    }
    return bursts;
}

} // namespace ctisim
