#include "ctisim/rng.h"

#include <cmath>

namespace ctisim {

std::uint64_t
Mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(RngState state)
    : m_state(state),
      m_engine(Mix64(Mix64(state.seed) ^ (0xd1b54a32d192ed03ULL * (state.streamId + 1ULL))))
{
}

double
RngStream::NextUnit()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double
RngStream::NextExponential(double mean)
{
    // 1 - u lies in (0, 1], so the log is finite.
    return -mean * std::log(1.0 - NextUnit());
}

} // namespace ctisim
