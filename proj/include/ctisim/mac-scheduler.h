// DU MAC uplink scheduler and the UE/RU timing that turns a grant into
// fronthaul bytes at the RU's ONU.

#ifndef CTISIM_MAC_SCHEDULER_H
#define CTISIM_MAC_SCHEDULER_H

#include "ctisim/ratio.h"
#include "ctisim/sim-time.h"

#include <cstdint>
#include <span>
#include <vector>

namespace ctisim {

/// Abstract stand-in for the uplink DCI the DU exposes over FAPI.
struct UlGrant
{
    std::uint64_t grantId{0};
    std::uint32_t ueId{0};
    std::uint64_t issueSlot{0};
    std::uint32_t k2Slots{0};
    std::uint64_t tbsBytes{0};
    SimTime issuedAt;

    std::uint64_t TransmissionSlot() const { return issueSlot + k2Slots; }
};

struct SlotConfig
{
    SimTime slotDuration{SimTime::Microseconds(500)};
    std::uint32_t slotsPerFrame{20};
    SimTime ueProcessingDelay;
    SimTime ruProcessingDelay;
    Ratio fronthaulOverheadFactor{11, 10};
};

struct MacConfig
{
    std::uint32_t k2Slots{2};
    std::uint64_t maxTbsBytes{65536};
    /// Upper bound on grants issued in one slot.
    std::uint32_t maxGrantsPerSlot{4};
};

struct UeDemand
{
    std::uint32_t ueId{0};
    std::uint64_t bufferBytes{0};
};

class MacScheduler
{
  public:
    explicit MacScheduler(MacConfig config);

    /// Round-robin over UEs with nonzero demand.  UEs are visited in
    /// ascending ue id starting after the last UE served.
    std::vector<UlGrant> Schedule(std::uint64_t slot, std::span<const UeDemand> demands, const SlotConfig& slots);

    const MacConfig& Config() const { return m_config; }

  private:
    MacConfig m_config;
    std::uint32_t m_nextUe{0};
    std::uint64_t m_nextGrantId{0};
};

/// issued_at + k2 * slot + UE delay + RU delay
SimTime FronthaulArrivalTime(const UlGrant& grant, const SlotConfig& slots);

/// ceil(tbs * fronthaul overhead factor)
std::uint64_t FronthaulBytes(std::uint64_t tbsBytes, const SlotConfig& slots);

struct FronthaulBatch
{
    SimTime arrival;
    std::vector<std::uint32_t> packetSizes;

    std::uint64_t TotalBytes() const;
};

/// The RU's upstream emission for one grant, cut into MTU-sized packets.
FronthaulBatch UeTransmit(const UlGrant& grant, const SlotConfig& slots, std::uint32_t mtuBytes);

} // namespace ctisim

#endif
