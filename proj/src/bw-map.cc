#include "ctisim/bw-map.h"

namespace ctisim {

std::string
ValidateBwMap(const BwMap& map, std::uint32_t capacityBytes, const FrameLayout& layout)
{
    std::uint64_t previousEnd = 0;
    std::uint64_t consumed = 0;
    for (std::size_t i = 0; i < map.entries.size(); ++i)
    {
        const GrantEntry& e = map.entries[i];
        std::string where = "frame " + std::to_string(map.frameIndex) + " entry " + std::to_string(i);
        if (e.grantBytes == 0)
        {
            return where + ": zero grant";
        }
        if (e.startOffsetBytes < layout.burstOverheadBytes)
        {
            return where + ": no room for burst overhead";
        }
        std::uint64_t begin = e.startOffsetBytes - layout.burstOverheadBytes;
        if (begin < previousEnd)
        {
            return where + ": overlaps previous entry or out of order";
        }
        std::uint64_t end = std::uint64_t{e.startOffsetBytes} + e.grantBytes + layout.guardBytes;
        if (end > capacityBytes)
        {
            return where + ": exceeds frame capacity";
        }
        previousEnd = end;
        consumed += layout.EntryCost(e.grantBytes);
    }
    if (consumed > capacityBytes)
    {
        return "frame " + std::to_string(map.frameIndex) + ": consumption exceeds capacity";
    }
    return {};
}

std::uint64_t
ConsumedBytes(const BwMap& map, const FrameLayout& layout)
{
    std::uint64_t total = 0;
    for (const auto& e : map.entries)
    {
        total += layout.EntryCost(e.grantBytes);
    }
    return total;
}

namespace {

void
Put(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i)
    {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

} // namespace

std::vector<std::uint8_t>
EncodeBwMap(const BwMap& map)
{
    std::vector<std::uint8_t> out;
    out.reserve(20 + 11 * map.entries.size());
    Put(out, map.frameIndex, 8);
    Put(out, map.broadcastAt.Ns(), 8);
    Put(out, map.entries.size(), 4);
    for (const auto& e : map.entries)
    {
        Put(out, e.allocId, 2);
        Put(out, e.startOffsetBytes, 4);
        Put(out, e.grantBytes, 4);
        Put(out, e.requestDbru ? 1 : 0, 1);
    }
    return out;
}

} // namespace ctisim
