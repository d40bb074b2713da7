// Per-source random streams.  Each traffic source (and the CTI bus) draws
// from its own generator derived from (seed, stream id), so adding a source
// leaves every other source's sequence untouched.

#ifndef CTISIM_RNG_H
#define CTISIM_RNG_H

#include <cstdint>
#include <random>

namespace ctisim {

struct RngState
{
    std::uint64_t seed{1};
    std::uint32_t streamId{0};
};

class RngStream
{
  public:
    explicit RngStream(RngState state);

    std::uint64_t NextU64() { return m_engine(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double NextUnit();

    /// Exponential variate with the given mean, by inversion.
    double NextExponential(double mean);

    const RngState& State() const { return m_state; }

  private:
    RngState m_state;
    std::mt19937_64 m_engine;
};

/// SplitMix64 finalizer, used to decorrelate (seed, stream) pairs.
std::uint64_t Mix64(std::uint64_t x);

} // namespace ctisim

#endif
