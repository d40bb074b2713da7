#include "ctisim/traffic.h"

#include <cmath>
#include <stdexcept>

namespace ctisim {

const char*
ToString(SourceKind kind)
{
    return kind == SourceKind::ConstantBitRate ? "cbr" : "poisson";
}

SourceKind
ParseSourceKind(const std::string& text)
{
    if (text == "cbr")
    {
        return SourceKind::ConstantBitRate;
    }
    if (text == "poisson")
    {
        return SourceKind::Poisson;
    }
    throw std::invalid_argument("unknown source kind '" + text + "' (expected cbr or poisson)");
}

TrafficSource::TrafficSource(SourceSpec spec, std::uint64_t lineRateBps, RngStream rng)
    : m_spec(spec),
      m_rng(rng)
{
    if (m_spec.packetSizeBytes == 0)
    {
        throw std::invalid_argument("source packet size must be positive");
    }
    if (lineRateBps == 0)
    {
        throw std::invalid_argument("line rate must be positive");
    }
    m_active = !m_spec.rateFraction.IsZero() && m_spec.start < m_spec.stop;
    if (!m_active)
    {
        return;
    }
    // spacing = size * 8 * 1e9 / (fraction * rate) ns
    //         = size * 8e9 * den / (num * rate)
    unsigned __int128 num = static_cast<unsigned __int128>(m_spec.packetSizeBytes) * 8ULL * 1000000000ULL *
                            m_spec.rateFraction.Denominator();
    unsigned __int128 den = static_cast<unsigned __int128>(m_spec.rateFraction.Numerator()) * lineRateBps;
    m_whole = static_cast<std::uint64_t>(num / den);
    m_rem = num % den;
    m_den = den;
    m_next = m_spec.start;
}

double
TrafficSource::MeanSpacingNs() const
{
    if (!m_active)
    {
        return INFINITY;
    }
    return static_cast<double>(m_whole) + static_cast<double>(m_rem) / static_cast<double>(m_den);
}

std::optional<Arrival>
TrafficSource::NextArrival()
{
    if (!m_active)
    {
        return std::nullopt;
    }
    if (m_spec.kind == SourceKind::ConstantBitRate)
    {
        if (m_started)
        {
            std::uint64_t step = m_whole;
            m_acc += m_rem;
            if (m_acc >= m_den)
            {
                m_acc -= m_den;
                ++step;
            }
            m_next += SimTime(step);
        }
    }
    else
    {
        double gap = m_rng.NextExponential(MeanSpacingNs());
        m_next += SimTime(static_cast<std::uint64_t>(std::llround(gap)));
    }
    m_started = true;
    if (m_next >= m_spec.stop)
    {
        m_active = false;
        return std::nullopt;
    }
    return Arrival{m_next, m_spec.packetSizeBytes};
}

} // namespace ctisim
