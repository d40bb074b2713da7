#include "ctisim/cti.h"

#include <stdexcept>

namespace ctisim {

std::optional<AllocId>
RuMap::AllocFor(std::uint32_t ueId) const
{
    auto ru = ueToRu.find(ueId);
    if (ru == ueToRu.end())
    {
        return std::nullopt;
    }
    auto alloc = ruToAlloc.find(ru->second);
    if (alloc == ruToAlloc.end())
    {
        return std::nullopt;
    }
    return alloc->second;
}

std::optional<CtiMessage>
TranslateUlGrant(const UlGrant& grant, const RuMap& ruMap, const SlotConfig& slots)
{
    auto alloc = ruMap.AllocFor(grant.ueId);
    if (!alloc)
    {
        return std::nullopt;
    }
    CtiMessage msg;
    msg.allocId = *alloc;
    msg.expectedArrival = FronthaulArrivalTime(grant, slots);
    msg.expectedBytes = FronthaulBytes(grant.tbsBytes, slots);
    msg.originGrant = grant;
    msg.publishedAt = grant.issuedAt;
    return msg;
}

CtiTranslator::CtiTranslator(RuMap ruMap, SlotConfig slots)
    : m_ruMap(std::move(ruMap)),
      m_slots(slots)
{
}

std::optional<CtiMessage>
CtiTranslator::Translate(const UlGrant& grant)
{
    auto msg = TranslateUlGrant(grant, m_ruMap, m_slots);
    if (!msg)
    {
        ++m_misses;
    }
    return msg;
}

CtiBus::CtiBus(BusConfig config, RngStream rng)
    : m_config(config),
      m_rng(rng)
{
    const Ratio& p = m_config.lossProbability;
    if (p > Ratio::FromInteger(1))
    {
        throw std::invalid_argument("loss probability above 1");
    }
    // Loss when a 64-bit draw falls below p * 2^64.
    m_alwaysLose = p == Ratio::FromInteger(1);
    unsigned __int128 scaled = (static_cast<unsigned __int128>(p.Numerator()) << 64) / p.Denominator();
    m_lossThreshold = m_alwaysLose ? UINT64_MAX : static_cast<std::uint64_t>(scaled);
}

std::optional<SimTime>
CtiBus::Publish(const CtiMessage& msg)
{
    // Always draw, so the stream position depends only on the publish count.
    std::uint64_t draw = m_rng.NextU64();
    bool lost = m_alwaysLose || draw < m_lossThreshold;
    m_trace.push_back(CtiTraceRow{msg.publishedAt.Ns(), msg.allocId, msg.expectedArrival.Ns(), msg.expectedBytes, !lost});
    if (lost)
    {
        ++m_lost;
        return std::nullopt;
    }
    return msg.publishedAt + m_config.deliveryLatency;
}

void
WriteCtiTrace(std::ostream& os, const std::vector<CtiTraceRow>& rows)
{
    os << "published_at_ns,alloc_id,expected_arrival_ns,expected_bytes,delivered\n";
    for (const auto& r : rows)
    {
        os << r.publishedAtNs << ',' << r.allocId << ',' << r.expectedArrivalNs << ',' << r.expectedBytes << ','
           << (r.delivered ? 1 : 0) << '\n';
    }
}

} // namespace ctisim
