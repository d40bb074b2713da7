#include "ctisim/event-queue.h"

namespace ctisim {

const char*
ToString(EventKind kind)
{
    switch (kind)
    {
    case EventKind::PacketArrival:
        return "PacketArrival";
    case EventKind::BwMapBroadcast:
        return "BwMapBroadcast";
    case EventKind::BurstStart:
        return "BurstStart";
    case EventKind::BurstEnd:
        return "BurstEnd";
    case EventKind::DbruReport:
        return "DbruReport";
    case EventKind::SlotTick:
        return "SlotTick";
    case EventKind::CtiDelivery:
        return "CtiDelivery";
    case EventKind::UeTxReady:
        return "UeTxReady";
    }
    return "Unknown";
}

std::uint64_t
HashStep(std::uint64_t hash, std::uint64_t value)
{
    for (int i = 0; i < 8; ++i)
    {
        hash ^= (value >> (8 * i)) & 0xffU;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace ctisim
