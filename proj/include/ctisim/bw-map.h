// Per-frame upstream Bandwidth Map.
//
// Layout of one entry inside the frame, in bytes:
//
//   [start - burstOverhead, start)          preamble / delimiter
//   [start, start + grantBytes)             payload the ONU may send
//   [start + grantBytes, ... + guard)       guard gap before the next burst
//
// so every entry consumes burstOverhead + grantBytes + guard bytes of the
// frame capacity.

#ifndef CTISIM_BW_MAP_H
#define CTISIM_BW_MAP_H

#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"

#include <cstdint>
#include <string>
#include <vector>

namespace ctisim {

struct GrantEntry
{
    AllocId allocId{0};
    std::uint32_t startOffsetBytes{0};
    std::uint32_t grantBytes{0};
    bool requestDbru{false};

    bool operator==(const GrantEntry&) const = default;
};

struct BwMap
{
    std::uint64_t frameIndex{0};
    std::vector<GrantEntry> entries;
    SimTime broadcastAt;

    bool operator==(const BwMap&) const = default;
};

struct FrameLayout
{
    std::uint32_t burstOverheadBytes{64};
    std::uint32_t guardBytes{32};

    std::uint32_t EntryCost(std::uint32_t grantBytes) const
    {
        return burstOverheadBytes + grantBytes + guardBytes;
    }
};

/// Checks sort order, non-overlap and the capacity bound.  Returns an empty
/// string when the map is well formed, else a description of the first
/// violation.
std::string ValidateBwMap(const BwMap& map, std::uint32_t capacityBytes, const FrameLayout& layout);

/// Total bytes the entries consume including overhead and guard.
std::uint64_t ConsumedBytes(const BwMap& map, const FrameLayout& layout);

/// Little-endian byte image used to compare maps across runs.
std::vector<std::uint8_t> EncodeBwMap(const BwMap& map);

constexpr std::uint32_t
RoundUpToWord(std::uint64_t bytes)
{
    return static_cast<std::uint32_t>((bytes + 3) & ~std::uint64_t{3});
}

constexpr std::uint32_t
RoundDownToWord(std::uint64_t bytes)
{
    return static_cast<std::uint32_t>(bytes & ~std::uint64_t{3});
}

} // namespace ctisim

#endif
