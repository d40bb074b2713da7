// Load generators: constant bit rate and Poisson sources expressed as a
// fraction of the PON line rate.

#ifndef CTISIM_TRAFFIC_H
#define CTISIM_TRAFFIC_H

#include "ctisim/ratio.h"
#include "ctisim/rng.h"
#include "ctisim/sim-time.h"

#include <cstdint>
#include <optional>
#include <string>

namespace ctisim {

enum class SourceKind
{
    ConstantBitRate,
    Poisson,
};

const char* ToString(SourceKind kind);
SourceKind ParseSourceKind(const std::string& text);

enum class SourceTarget
{
    /// Packets go straight into an ONU TCONT.
    Tcont,
    /// Bytes accumulate in a UE's uplink buffer and wait for MAC grants.
    UeBuffer,
};

struct SourceSpec
{
    SourceKind kind{SourceKind::ConstantBitRate};
    Ratio rateFraction;
    std::uint32_t packetSizeBytes{1500};
    SourceTarget target{SourceTarget::Tcont};
    /// Alloc-ID for Tcont targets, UE id for UeBuffer targets.
    std::uint32_t targetId{0};
    SimTime start;
    SimTime stop{SimTime::Max()};
};

struct Arrival
{
    SimTime at;
    std::uint32_t sizeBytes{0};
};

class TrafficSource
{
  public:
    TrafficSource(SourceSpec spec, std::uint64_t lineRateBps, RngStream rng);

    /// Next arrival strictly before the stop time, or nullopt when the
    /// source is exhausted or has zero rate.
    std::optional<Arrival> NextArrival();

    const SourceSpec& Spec() const { return m_spec; }
    /// Mean inter-arrival time in ns.
    double MeanSpacingNs() const;

  private:
    SourceSpec m_spec;
    RngStream m_rng;
    bool m_active{false};
    bool m_started{false};
    SimTime m_next;
    // CBR spacing as whole ns plus a remainder over m_den, accumulated
    // exactly so the long-run rate has no drift.
    std::uint64_t m_whole{0};
    unsigned __int128 m_rem{0};
    unsigned __int128 m_den{1};
    unsigned __int128 m_acc{0};
};

} // namespace ctisim

#endif
