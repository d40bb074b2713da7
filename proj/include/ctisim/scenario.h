// Scenario configuration.
//
// A scenario file is flat text, one `dotted.key = value` per line, `#`
// starts a comment.  Every key has a default, unknown keys are rejected and
// durations are given in the unit named by the key suffix and converted to
// integer nanoseconds on load.  See scenarios/README.md for the schema.

#ifndef CTISIM_SCENARIO_H
#define CTISIM_SCENARIO_H

#include "ctisim/cti.h"
#include "ctisim/mac-scheduler.h"
#include "ctisim/ratio.h"
#include "ctisim/sim-time.h"
#include "ctisim/tcont-queue.h"
#include "ctisim/traffic.h"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctisim {

class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string key, const std::string& reason)
        : std::runtime_error(key.empty() ? reason : key + ": " + reason),
          m_key(std::move(key))
    {
    }

    const std::string& Key() const { return m_key; }

  private:
    std::string m_key;
};

inline constexpr AllocId kControlAllocId = 1000;
inline constexpr AllocId kFronthaulAllocBase = 1024;
inline constexpr AllocId kBackgroundAllocBase = 1100;

struct PonParams
{
    std::uint64_t lineRateBps{9953280000ULL};
    SimTime frameDuration{SimTime::Microseconds(125)};
    Ratio fixedOverheadFraction;
    std::uint32_t burstOverheadBytes{64};
    std::uint32_t guardBytes{32};
    std::uint32_t pollGrantBytes{4};
    std::uint32_t pollingPeriodFrames{1};
    std::uint64_t bufferLimitControlBytes{65536};
    std::uint64_t bufferLimitFronthaulBytes{1048576};
    std::uint64_t bufferLimitBackgroundBytes{16777216};
    SimTime downstreamPropagation{SimTime::Microseconds(25)};
    SimTime upstreamPropagation{SimTime::Microseconds(25)};
    std::uint32_t oltCount{1};
    std::uint32_t cascadeMinShareBytes{4096};
    bool controlTcont{true};

    /// Upstream payload bytes per frame after the fixed overhead, rounded
    /// down to a whole word.
    std::uint32_t CapacityBytes() const;
};

struct RanParams
{
    SlotConfig slots;
    MacConfig mac;
    std::uint32_t ueCount{2};
    std::uint32_t mtuBytes{1500};
};

struct CtiParams
{
    BusConfig bus;
    /// RU id -> Alloc-ID of the RU's fronthaul TCONT.
    std::vector<std::pair<std::uint32_t, AllocId>> ruAllocMap{{0, kFronthaulAllocBase}};
};

struct TrafficParams
{
    /// Aggregate UE uplink payload rate, as a fraction of the line rate,
    /// split evenly across the UEs.
    Ratio ueFraction{3, 20};
    SourceKind ueKind{SourceKind::ConstantBitRate};
    std::uint32_t uePacketBytes{1500};
    /// Background load, split evenly across the background ONUs.  Does not
    /// include the UE flow.
    Ratio backgroundFraction{4, 5};
    SourceKind backgroundKind{SourceKind::ConstantBitRate};
    std::uint32_t backgroundOnus{3};
    std::uint32_t backgroundPacketBytes{1500};
    Ratio controlFraction{1, 1000};
    std::uint32_t controlPacketBytes{256};
};

struct SweepSpec
{
    std::vector<Ratio> fractions;

    static SweepSpec Default();
};

enum class ModeSelection
{
    Baseline,
    Cti,
    Both,
};

const char* ToString(ModeSelection mode);
ModeSelection ParseModeSelection(const std::string& text);

enum class PacketTrace
{
    None,
    Fronthaul,
    All,
};

struct Scenario
{
    std::uint64_t seed{1};
    SimTime duration{SimTime::Milliseconds(2000)};
    SimTime warmup{SimTime::Milliseconds(10)};
    /// Packets enqueued in the last `cooldown` of the run are not measured,
    /// so that measured packets have time to reach the OLT.
    SimTime cooldown{SimTime::Milliseconds(5)};
    ModeSelection mode{ModeSelection::Both};
    PonParams pon;
    RanParams ran;
    CtiParams cti;
    TrafficParams traffic;
    SweepSpec sweep{SweepSpec::Default()};
    PacketTrace packetTrace{PacketTrace::Fronthaul};

    RuMap BuildRuMap() const;
};

/// Throws ConfigError naming the offending key.
void ValidateScenario(const Scenario& scenario);

Scenario ParseScenario(const std::string& text);
Scenario LoadScenario(const std::string& path);

/// Every key with its effective value, in schema order.  Parsing the
/// output yields the same scenario.
std::string DumpScenario(const Scenario& scenario);

/// Key names in schema order, for documentation and tests.
std::vector<std::string> ScenarioKeys();

std::vector<Ratio> ParseFractionList(const std::string& text);

} // namespace ctisim

#endif
