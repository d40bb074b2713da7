#include "ctisim/scenario.h"

#include "ctisim/bw-map.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ctisim {

namespace {

std::string
Trim(std::string_view s)
{
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
    {
        return {};
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string>
SplitList(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = Trim(item);
        if (!item.empty())
        {
            out.push_back(item);
        }
    }
    return out;
}

std::uint64_t
ParseU64(const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    {
        throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

std::uint32_t
ParseU32(const std::string& key, const std::string& value)
{
    std::uint64_t v = ParseU64(key, value);
    if (v > UINT32_MAX)
    {
        throw ConfigError(key, "value out of range: '" + value + "'");
    }
    return static_cast<std::uint32_t>(v);
}

Ratio
ParseRatio(const std::string& key, const std::string& value)
{
    try
    {
        return Ratio::Parse(value);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(key, e.what());
    }
}

bool
ParseBool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
    {
        return true;
    }
    if (value == "false" || value == "0")
    {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + value + "'");
}

SimTime
ParseDuration(const std::string& key, const std::string& value, std::uint64_t unitNs)
{
    Ratio r = ParseRatio(key, value);
    Ratio ns = r * Ratio::FromInteger(unitNs);
    if (ns.Denominator() != 1)
    {
        throw ConfigError(key, "'" + value + "' is not a whole number of nanoseconds");
    }
    return SimTime(ns.Numerator());
}

std::string
FormatDuration(SimTime t, std::uint64_t unitNs)
{
    return Ratio(t.Ns(), unitNs).ToString();
}

std::string
FormatRatioList(const std::vector<Ratio>& list)
{
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        out += (i ? "," : "") + list[i].ToString();
    }
    return out;
}

const char*
ToString(PacketTrace t)
{
    switch (t)
    {
    case PacketTrace::None:
        return "none";
    case PacketTrace::Fronthaul:
        return "fronthaul";
    case PacketTrace::All:
        return "all";
    }
    return "none";
}

struct KeySpec
{
    std::string name;
    std::function<void(Scenario&, const std::string&, const std::string&)> apply;
    std::function<std::string(const Scenario&)> dump;
};

constexpr std::uint64_t kUs = 1000;
constexpr std::uint64_t kMs = 1000000;

#define CTISIM_U64(KEY, FIELD)                                                                     \
    KeySpec{KEY, [](Scenario& s, const std::string& k, const std::string& v) { s.FIELD = ParseU64(k, v); }, \
            [](const Scenario& s) { return std::to_string(s.FIELD); }}
#define CTISIM_U32(KEY, FIELD)                                                                     \
    KeySpec{KEY, [](Scenario& s, const std::string& k, const std::string& v) { s.FIELD = ParseU32(k, v); }, \
            [](const Scenario& s) { return std::to_string(s.FIELD); }}
#define CTISIM_RATIO(KEY, FIELD)                                                                   \
    KeySpec{KEY, [](Scenario& s, const std::string& k, const std::string& v) { s.FIELD = ParseRatio(k, v); }, \
            [](const Scenario& s) { return s.FIELD.ToString(); }}
#define CTISIM_TIME(KEY, FIELD, UNIT)                                                              \
    KeySpec{KEY,                                                                                   \
            [](Scenario& s, const std::string& k, const std::string& v) { s.FIELD = ParseDuration(k, v, UNIT); }, \
            [](const Scenario& s) { return FormatDuration(s.FIELD, UNIT); }}
#define CTISIM_KIND(KEY, FIELD)                                                                    \
    KeySpec{KEY,                                                                                   \
            [](Scenario& s, const std::string& k, const std::string& v) {                          \
                try                                                                                \
                {                                                                                  \
                    s.FIELD = ParseSourceKind(v);                                                  \
                }                                                                                  \
                catch (const std::invalid_argument& e)                                             \
                {                                                                                  \
                    throw ConfigError(k, e.what());                                                \
                }                                                                                  \
            },                                                                                     \
            [](const Scenario& s) { return std::string(ToString(s.FIELD)); }}

const std::vector<KeySpec>&
Schema()
{
    static const std::vector<KeySpec> schema = {
        CTISIM_U64("sim.seed", seed),
        CTISIM_TIME("sim.duration_ms", duration, kMs),
        CTISIM_TIME("sim.warmup_ms", warmup, kMs),
        CTISIM_TIME("sim.cooldown_ms", cooldown, kMs),
        KeySpec{"sim.mode",
                [](Scenario& s, const std::string& k, const std::string& v) {
                    try
                    {
                        s.mode = ParseModeSelection(v);
                    }
                    catch (const std::invalid_argument& e)
                    {
                        throw ConfigError(k, e.what());
                    }
                },
                [](const Scenario& s) { return std::string(ToString(s.mode)); }},
        KeySpec{"pon.line_rate_bps",
                [](Scenario& s, const std::string& k, const std::string& v) {
                    std::uint64_t r = 0;
                    try
                    {
                        r = ParseU64(k, v);
                    }
                    catch (const ConfigError&)
                    {
                        throw ConfigError(k, "line rate must be a positive integer, got '" + v + "'");
                    }
                    s.pon.lineRateBps = r;
                },
                [](const Scenario& s) { return std::to_string(s.pon.lineRateBps); }},
        CTISIM_TIME("pon.frame_duration_us", pon.frameDuration, kUs),
        CTISIM_RATIO("pon.fixed_overhead_fraction", pon.fixedOverheadFraction),
        CTISIM_U32("pon.burst_overhead_bytes", pon.burstOverheadBytes),
        CTISIM_U32("pon.guard_bytes", pon.guardBytes),
        CTISIM_U32("pon.poll_grant_bytes", pon.pollGrantBytes),
        CTISIM_U32("pon.polling_period_frames", pon.pollingPeriodFrames),
        CTISIM_U64("pon.buffer_limit_control_bytes", pon.bufferLimitControlBytes),
        CTISIM_U64("pon.buffer_limit_fronthaul_bytes", pon.bufferLimitFronthaulBytes),
        CTISIM_U64("pon.buffer_limit_background_bytes", pon.bufferLimitBackgroundBytes),
        CTISIM_TIME("pon.downstream_propagation_us", pon.downstreamPropagation, kUs),
        CTISIM_TIME("pon.upstream_propagation_us", pon.upstreamPropagation, kUs),
        CTISIM_U32("pon.olt_count", pon.oltCount),
        CTISIM_U32("pon.cascade_min_share_bytes", pon.cascadeMinShareBytes),
        KeySpec{"pon.control_tcont",
                [](Scenario& s, const std::string& k, const std::string& v) { s.pon.controlTcont = ParseBool(k, v); },
                [](const Scenario& s) { return std::string(s.pon.controlTcont ? "true" : "false"); }},
        CTISIM_TIME("ran.slot_duration_us", ran.slots.slotDuration, kUs),
        CTISIM_U32("ran.slots_per_frame", ran.slots.slotsPerFrame),
        CTISIM_U32("ran.k2_slots", ran.mac.k2Slots),
        CTISIM_TIME("ran.ue_processing_delay_us", ran.slots.ueProcessingDelay, kUs),
        CTISIM_TIME("ran.ru_processing_delay_us", ran.slots.ruProcessingDelay, kUs),
        CTISIM_RATIO("ran.fronthaul_overhead_factor", ran.slots.fronthaulOverheadFactor),
        CTISIM_U64("ran.max_tbs_bytes", ran.mac.maxTbsBytes),
        CTISIM_U32("ran.max_grants_per_slot", ran.mac.maxGrantsPerSlot),
        CTISIM_U32("ran.ue_count", ran.ueCount),
        CTISIM_U32("ran.mtu_bytes", ran.mtuBytes),
        CTISIM_TIME("cti.delivery_latency_us", cti.bus.deliveryLatency, kUs),
        CTISIM_RATIO("cti.loss_probability", cti.bus.lossProbability),
        KeySpec{"cti.ru_alloc_map",
                [](Scenario& s, const std::string& k, const std::string& v) {
                    s.cti.ruAllocMap.clear();
                    for (const auto& item : SplitList(v))
                    {
                        auto colon = item.find(':');
                        if (colon == std::string::npos)
                        {
                            throw ConfigError(k, "expected ru:alloc pairs, got '" + item + "'");
                        }
                        std::uint32_t ru = ParseU32(k, Trim(item.substr(0, colon)));
                        std::uint32_t alloc = ParseU32(k, Trim(item.substr(colon + 1)));
                        if (alloc > UINT16_MAX)
                        {
                            throw ConfigError(k, "alloc id out of range: " + std::to_string(alloc));
                        }
                        s.cti.ruAllocMap.emplace_back(ru, static_cast<AllocId>(alloc));
                    }
                },
                [](const Scenario& s) {
                    std::string out;
                    for (std::size_t i = 0; i < s.cti.ruAllocMap.size(); ++i)
                    {
                        out += (i ? "," : "") + std::to_string(s.cti.ruAllocMap[i].first) + ":" +
                               std::to_string(s.cti.ruAllocMap[i].second);
                    }
                    return out;
                }},
        CTISIM_RATIO("traffic.ue_fraction", traffic.ueFraction),
        CTISIM_KIND("traffic.ue_kind", traffic.ueKind),
        CTISIM_U32("traffic.ue_packet_bytes", traffic.uePacketBytes),
        CTISIM_RATIO("traffic.background_fraction", traffic.backgroundFraction),
        CTISIM_KIND("traffic.background_kind", traffic.backgroundKind),
        CTISIM_U32("traffic.background_onus", traffic.backgroundOnus),
        CTISIM_U32("traffic.background_packet_bytes", traffic.backgroundPacketBytes),
        CTISIM_RATIO("traffic.control_fraction", traffic.controlFraction),
        CTISIM_U32("traffic.control_packet_bytes", traffic.controlPacketBytes),
        KeySpec{"sweep.fractions",
                [](Scenario& s, const std::string& k, const std::string& v) {
                    try
                    {
                        s.sweep.fractions = ParseFractionList(v);
                    }
                    catch (const std::invalid_argument& e)
                    {
                        throw ConfigError(k, e.what());
                    }
                },
                [](const Scenario& s) { return FormatRatioList(s.sweep.fractions); }},
        KeySpec{"output.packet_trace",
                [](Scenario& s, const std::string& k, const std::string& v) {
                    if (v == "none")
                    {
                        s.packetTrace = PacketTrace::None;
                    }
                    else if (v == "fronthaul")
                    {
                        s.packetTrace = PacketTrace::Fronthaul;
                    }
                    else if (v == "all")
                    {
                        s.packetTrace = PacketTrace::All;
                    }
                    else
                    {
                        throw ConfigError(k, "expected none, fronthaul or all, got '" + v + "'");
                    }
                },
                [](const Scenario& s) { return std::string(ToString(s.packetTrace)); }},
    };
    return schema;
}

#undef CTISIM_U64
#undef CTISIM_U32
#undef CTISIM_RATIO
#undef CTISIM_TIME
#undef CTISIM_KIND

} // namespace

std::uint32_t
PonParams::CapacityBytes() const
{
    unsigned __int128 bits = static_cast<unsigned __int128>(frameDuration.Ns()) * lineRateBps;
    std::uint64_t raw = static_cast<std::uint64_t>(bits / (8ULL * 1000000000ULL));
    std::uint64_t overhead = fixedOverheadFraction.MulCeil(raw);
    std::uint64_t usable = raw > overhead ? raw - overhead : 0;
    if (usable > UINT32_MAX)
    {
        usable = UINT32_MAX;
    }
    return RoundDownToWord(usable);
}

SweepSpec
SweepSpec::Default()
{
    SweepSpec s;
    for (std::uint64_t tenths = 5; tenths <= 11; ++tenths)
    {
        s.fractions.push_back(Ratio(tenths, 10));
    }
    return s;
}

const char*
ToString(ModeSelection mode)
{
    switch (mode)
    {
    case ModeSelection::Baseline:
        return "baseline";
    case ModeSelection::Cti:
        return "cti";
    case ModeSelection::Both:
        return "both";
    }
    return "both";
}

ModeSelection
ParseModeSelection(const std::string& text)
{
    if (text == "baseline")
    {
        return ModeSelection::Baseline;
    }
    if (text == "cti")
    {
        return ModeSelection::Cti;
    }
    if (text == "both")
    {
        return ModeSelection::Both;
    }
    throw std::invalid_argument("unknown mode '" + text + "' (expected baseline, cti or both)");
}

std::vector<Ratio>
ParseFractionList(const std::string& text)
{
    std::vector<Ratio> out;
    for (const auto& item : SplitList(text))
    {
        out.push_back(Ratio::Parse(item));
    }
    return out;
}

RuMap
Scenario::BuildRuMap() const
{
    RuMap map;
    for (std::uint32_t ue = 0; ue < ran.ueCount; ++ue)
    {
        map.ueToRu[ue] = 0;
    }
    for (const auto& [ru, alloc] : cti.ruAllocMap)
    {
        map.ruToAlloc[ru] = alloc;
    }
    return map;
}

void
ValidateScenario(const Scenario& s)
{
    if (s.pon.lineRateBps == 0)
    {
        throw ConfigError("pon.line_rate_bps", "line rate must be positive");
    }
    if (s.pon.frameDuration == SimTime())
    {
        throw ConfigError("pon.frame_duration_us", "frame duration must be positive");
    }
    if (s.pon.fixedOverheadFraction >= Ratio::FromInteger(1))
    {
        throw ConfigError("pon.fixed_overhead_fraction", "must be below 1");
    }
    const std::uint32_t capacity = s.pon.CapacityBytes();
    const std::uint64_t entryCost = std::uint64_t{s.pon.burstOverheadBytes} + s.pon.guardBytes;
    if (capacity == 0 || entryCost + s.pon.pollGrantBytes > capacity)
    {
        throw ConfigError("pon.line_rate_bps", "frame capacity too small for a single polling grant");
    }
    if (s.pon.pollGrantBytes == 0)
    {
        throw ConfigError("pon.poll_grant_bytes", "must be positive");
    }
    if (s.pon.pollingPeriodFrames == 0)
    {
        throw ConfigError("pon.polling_period_frames", "must be at least 1");
    }
    if (s.pon.downstreamPropagation > s.pon.frameDuration)
    {
        throw ConfigError("pon.downstream_propagation_us", "a map must reach the ONUs within one frame");
    }
    if (s.pon.oltCount == 0)
    {
        throw ConfigError("pon.olt_count", "must be at least 1");
    }
    if (s.pon.oltCount > 1 && std::uint64_t{s.pon.cascadeMinShareBytes} * s.pon.oltCount > capacity)
    {
        throw ConfigError("pon.cascade_min_share_bytes", "floor shares exceed frame capacity");
    }
    if (s.traffic.backgroundOnus > 400)
    {
        throw ConfigError("traffic.background_onus", "at most 400 background ONUs");
    }
    if (s.ran.slots.slotDuration == SimTime())
    {
        throw ConfigError("ran.slot_duration_us", "slot duration must be positive");
    }
    if (s.ran.slots.fronthaulOverheadFactor < Ratio::FromInteger(1))
    {
        throw ConfigError("ran.fronthaul_overhead_factor", "must be at least 1");
    }
    if (s.ran.mac.maxTbsBytes == 0)
    {
        throw ConfigError("ran.max_tbs_bytes", "must be positive");
    }
    if (s.ran.mtuBytes == 0)
    {
        throw ConfigError("ran.mtu_bytes", "must be positive");
    }
    if (FronthaulBytes(s.ran.mac.maxTbsBytes, s.ran.slots) + entryCost > capacity)
    {
        throw ConfigError("ran.max_tbs_bytes", "largest fronthaul batch does not fit one upstream frame");
    }
    if (s.ran.mac.k2Slots == 0 && s.ran.slots.ueProcessingDelay == SimTime() && s.ran.slots.ruProcessingDelay == SimTime())
    {
        throw ConfigError("ran.k2_slots", "fronthaul must arrive strictly after the grant is issued");
    }
    if (s.cti.bus.lossProbability > Ratio::FromInteger(1))
    {
        throw ConfigError("cti.loss_probability", "must lie in [0, 1]");
    }
    std::set<std::uint32_t> rus;
    for (const auto& [ru, alloc] : s.cti.ruAllocMap)
    {
        if (!rus.insert(ru).second)
        {
            throw ConfigError("cti.ru_alloc_map", "RU " + std::to_string(ru) + " mapped twice");
        }
        if (ru != 0 || alloc != kFronthaulAllocBase)
        {
            throw ConfigError("cti.ru_alloc_map", "alloc " + std::to_string(alloc) + " for RU " + std::to_string(ru) +
                                                      " is not a registered fronthaul TCONT");
        }
    }
    auto checkPacket = [&](const char* key, std::uint32_t size) {
        if (size == 0)
        {
            throw ConfigError(key, "must be positive");
        }
        if (size > s.ran.mtuBytes)
        {
            throw ConfigError(key, "exceeds the MTU");
        }
    };
    checkPacket("traffic.ue_packet_bytes", s.traffic.uePacketBytes);
    checkPacket("traffic.background_packet_bytes", s.traffic.backgroundPacketBytes);
    checkPacket("traffic.control_packet_bytes", s.traffic.controlPacketBytes);
    if (s.duration <= s.warmup + s.cooldown)
    {
        throw ConfigError("sim.duration_ms", "must exceed warm-up plus cool-down");
    }
    if (s.sweep.fractions.empty())
    {
        throw ConfigError("sweep.fractions", "at least one load fraction required");
    }
    for (const auto& f : s.sweep.fractions)
    {
        if (f.IsZero())
        {
            throw ConfigError("sweep.fractions", "fractions must be positive");
        }
    }
}

Scenario
ParseScenario(const std::string& text)
{
    std::map<std::string, const KeySpec*> byName;
    for (const auto& spec : Schema())
    {
        byName[spec.name] = &spec;
    }
    Scenario s;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos)
        {
            line.erase(hash);
        }
        std::string body = Trim(line);
        if (body.empty())
        {
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError("", "line " + std::to_string(lineNo) + ": expected 'key = value'");
        }
        std::string key = Trim(body.substr(0, eq));
        std::string value = Trim(body.substr(eq + 1));
        auto it = byName.find(key);
        if (it == byName.end())
        {
            throw ConfigError(key, "unknown key (line " + std::to_string(lineNo) + ")");
        }
        if (!seen.insert(key).second)
        {
            throw ConfigError(key, "given more than once");
        }
        it->second->apply(s, key, value);
    }
    ValidateScenario(s);
    return s;
}

Scenario
LoadScenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("", "cannot open scenario file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return ParseScenario(buf.str());
}

std::string
DumpScenario(const Scenario& scenario)
{
    std::string out;
    for (const auto& spec : Schema())
    {
        out += spec.name + " = " + spec.dump(scenario) + "\n";
    }
    return out;
}

std::vector<std::string>
ScenarioKeys()
{
    std::vector<std::string> keys;
    for (const auto& spec : Schema())
    {
        keys.push_back(spec.name);
    }
    return keys;
}

} // namespace ctisim
