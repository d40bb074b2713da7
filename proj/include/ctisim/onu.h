// ONU side of the upstream: executing BwMap entries against TCONT queues
// and producing DBRu status reports.

#ifndef CTISIM_ONU_H
#define CTISIM_ONU_H

#include "ctisim/bw-map.h"
#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace ctisim {

struct DbruReport
{
    AllocId allocId{0};
    std::uint64_t occupancyBytes{0};
    SimTime reportedAt;
};

/// The report carries whatever occupancy the queue holds at the moment it
/// is sampled.
DbruReport GenerateDbru(const TcontQueue& tcont, SimTime now);

struct SentPacket
{
    Packet packet;
    /// Last byte of the packet reaches the OLT.
    SimTime deliveredAt;
};

struct Burst
{
    AllocId allocId{0};
    SimTime txStart;
    SimTime arrivalAtOlt;
    std::vector<SentPacket> sent;
    std::uint32_t usedBytes{0};
    std::uint32_t wastedBytes{0};
    bool unregistered{false};
    std::optional<DbruReport> report;
};

struct UpstreamTiming
{
    std::uint64_t lineRateBps{9953280000ULL};
    SimTime frameDuration{SimTime::Microseconds(125)};
    SimTime upstreamPropagation;
};

/// ONU transmit time of an entry: frame start + start offset at line rate.
SimTime GrantTxTime(std::uint64_t frameIndex, const GrantEntry& entry, const UpstreamTiming& timing);

/// Drains the queue FIFO for one entry.  Packets are never fragmented, so
/// draining stops at the first packet that does not fit what is left of the
/// grant.  A null queue means the Alloc-ID is not registered.
Burst ExecuteGrant(std::uint64_t frameIndex, const GrantEntry& entry, TcontQueue* queue, const UpstreamTiming& timing);

/// All entries of a map at once, for use outside the event loop.
std::vector<Burst> ExecuteBwMap(const BwMap& map, std::map<AllocId, TcontQueue*>& queues, const UpstreamTiming& timing);

} // namespace ctisim

#endif
