#include "ctisim/tcont-queue.h"

#include <stdexcept>

namespace ctisim {

const char*
ToString(PriorityClass cls)
{
    switch (cls)
    {
    case PriorityClass::Control:
        return "control";
    case PriorityClass::FronthaulUser:
        return "fronthaul";
    case PriorityClass::Background:
        return "background";
    }
    return "unknown";
}

TcontQueue::TcontQueue(AllocId allocId,
                       std::uint32_t onuId,
                       PriorityClass cls,
                       std::uint64_t bufferLimitBytes)
    : m_allocId(allocId),
      m_onuId(onuId),
      m_class(cls),
      m_limit(bufferLimitBytes)
{
}

EnqueueResult
TcontQueue::Enqueue(Packet packet, SimTime now)
{
    if (packet.sizeBytes == 0)
    {
        throw std::invalid_argument("zero-sized packet offered to alloc " + std::to_string(m_allocId));
    }
    if (m_occupancy + packet.sizeBytes > m_limit)
    {
        return EnqueueResult::Dropped;
    }
    packet.enqueuedAt = now;
    m_occupancy += packet.sizeBytes;
    m_fifo.push_back(packet);
    return EnqueueResult::Accepted;
}

Packet
TcontQueue::PopFront()
{
    Packet p = m_fifo.front();
    m_fifo.pop_front();
    m_occupancy -= p.sizeBytes;
    return p;
}

} // namespace ctisim
