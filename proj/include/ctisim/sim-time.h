// Integer-nanosecond simulation clock.  The same type carries instants and
// durations, mirroring how the event engine only ever adds and compares.

#ifndef CTISIM_SIM_TIME_H
#define CTISIM_SIM_TIME_H

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace ctisim {

class SimTime
{
  public:
    constexpr SimTime() = default;
    constexpr explicit SimTime(std::uint64_t ns)
        : m_ns(ns)
    {
    }

    static constexpr SimTime Nanoseconds(std::uint64_t v) { return SimTime(v); }
    static constexpr SimTime Microseconds(std::uint64_t v) { return SimTime(v * 1000ULL); }
    static constexpr SimTime Milliseconds(std::uint64_t v) { return SimTime(v * 1000000ULL); }
    static constexpr SimTime Seconds(std::uint64_t v) { return SimTime(v * 1000000000ULL); }
    static constexpr SimTime Max() { return SimTime(std::numeric_limits<std::uint64_t>::max()); }

    constexpr std::uint64_t Ns() const { return m_ns; }
    constexpr double Us() const { return static_cast<double>(m_ns) / 1e3; }

    constexpr SimTime operator+(SimTime o) const { return SimTime(m_ns + o.m_ns); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(m_ns - o.m_ns); }
    constexpr SimTime operator*(std::uint64_t k) const { return SimTime(m_ns * k); }
    constexpr SimTime& operator+=(SimTime o)
    {
        m_ns += o.m_ns;
        return *this;
    }

    constexpr auto operator<=>(const SimTime&) const = default;

  private:
    std::uint64_t m_ns{0};
};

inline std::string
ToString(SimTime t)
{
    return std::to_string(t.Ns()) + "ns";
}

/// Serialization time of `bytes` at `lineRateBps`, rounded down to whole ns.
inline SimTime
BytesToTime(std::uint64_t bytes, std::uint64_t lineRateBps)
{
    unsigned __int128 bits = static_cast<unsigned __int128>(bytes) * 8ULL * 1000000000ULL;
    return SimTime(static_cast<std::uint64_t>(bits / lineRateBps));
}

/// Smallest byte count whose serialization time is at least `t`.
inline std::uint64_t
TimeToBytesCeil(SimTime t, std::uint64_t lineRateBps)
{
    unsigned __int128 bits = static_cast<unsigned __int128>(t.Ns()) * lineRateBps;
    unsigned __int128 denom = 8ULL * 1000000000ULL;
    return static_cast<std::uint64_t>((bits + denom - 1) / denom);
}

} // namespace ctisim

#endif
