// Master/slave DBA cascade: one OLT divides the group's per-frame upstream
// budget among its members, and each member builds its own BwMap inside
// its share.

#ifndef CTISIM_CASCADE_H
#define CTISIM_CASCADE_H

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ctisim {

enum class CascadeRole
{
    Master,
    Slave,
};

struct OltRole
{
    std::uint32_t oltId{0};
    CascadeRole role{CascadeRole::Master};
    /// The other members of the group (for the master, every slave).
    std::vector<std::uint32_t> cascadePeers;
    std::uint32_t capacityShareBytes{0};
};

struct OltDemandSummary
{
    std::uint32_t oltId{0};
    std::uint64_t demandBytes{0};
    /// Burst overhead and guard the member's entries would add.
    std::uint64_t overheadBytes{0};
};

/// Shares per OLT id.  When the group fits, each slave gets
/// max(floor, demand + overhead) and the master keeps the rest of the
/// frame.  Otherwise every member gets the floor plus a word-rounded slice
/// of the remainder in proportion to its need above the floor, leftover to
/// the lowest OLT id.  A single-member group gets the whole frame.
std::map<std::uint32_t, std::uint32_t> CascadeAllocate(const OltRole& master,
                                                       std::span<const OltDemandSummary> demands,
                                                       std::uint32_t capacityBytes,
                                                       std::uint32_t minShareBytes);

} // namespace ctisim

#endif
