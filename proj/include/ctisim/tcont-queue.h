// ONU upstream buffer addressed by an Alloc-ID.

#ifndef CTISIM_TCONT_QUEUE_H
#define CTISIM_TCONT_QUEUE_H

#include "ctisim/sim-time.h"

#include <cstdint>
#include <deque>

namespace ctisim {

using AllocId = std::uint16_t;

/// Control carries DBA/management frames and is always placed ahead of
/// Background in a BwMap.  The baseline DBA treats FronthaulUser and
/// Background alike.
enum class PriorityClass : std::uint8_t
{
    Control,
    FronthaulUser,
    Background,
};

const char* ToString(PriorityClass cls);

struct Packet
{
    /// Index into the run's MetricsLedger.
    std::uint32_t recordId{0};
    std::uint32_t sizeBytes{0};
    SimTime createdAt;
    SimTime enqueuedAt;
};

enum class EnqueueResult
{
    Accepted,
    Dropped,
};

class TcontQueue
{
  public:
    TcontQueue(AllocId allocId, std::uint32_t onuId, PriorityClass cls, std::uint64_t bufferLimitBytes);

    AllocId GetAllocId() const { return m_allocId; }
    std::uint32_t GetOnuId() const { return m_onuId; }
    PriorityClass GetClass() const { return m_class; }
    std::uint64_t GetBufferLimit() const { return m_limit; }

    std::uint64_t OccupancyBytes() const { return m_occupancy; }
    std::size_t PacketCount() const { return m_fifo.size(); }
    bool Empty() const { return m_fifo.empty(); }

    /// Appends the packet stamped with enqueuedAt = now, unless it would
    /// push occupancy past the buffer limit.  Throws std::invalid_argument
    /// for zero-sized packets.
    EnqueueResult Enqueue(Packet packet, SimTime now);

    const Packet& Front() const { return m_fifo.front(); }
    Packet PopFront();

    const std::deque<Packet>& Contents() const { return m_fifo; }

  private:
    AllocId m_allocId;
    std::uint32_t m_onuId;
    PriorityClass m_class;
    std::uint64_t m_limit;
    std::deque<Packet> m_fifo;
    std::uint64_t m_occupancy{0};
};

} // namespace ctisim

#endif
