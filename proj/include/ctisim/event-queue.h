// Deterministic discrete-event engine.
//
// Events are ordered by (fire_at, seq), where seq is the insertion counter.
// Two events at the same instant therefore fire in the order they were
// scheduled; the engine knows nothing about priorities.  The payload type is
// a template parameter so that the engine does not depend on the models it
// drives.

#ifndef CTISIM_EVENT_QUEUE_H
#define CTISIM_EVENT_QUEUE_H

#include "ctisim/sim-time.h"

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctisim {

enum class EventKind : std::uint8_t
{
    PacketArrival,
    BwMapBroadcast,
    BurstStart,
    BurstEnd,
    DbruReport,
    SlotTick,
    CtiDelivery,
    UeTxReady,
};

const char* ToString(EventKind kind);

using EventId = std::uint64_t;

template <typename Payload>
struct Event
{
    SimTime fireAt;
    std::uint64_t seq{0};
    EventKind kind{EventKind::PacketArrival};
    Payload payload{};
};

struct RunReport
{
    SimTime clock;
    std::uint64_t events{0};
    /// FNV-1a over (fire_at, seq, kind) of every processed event.
    std::uint64_t traceHash{0};

    bool operator==(const RunReport&) const = default;
};

class SchedulingError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// FNV-1a step over the 8 bytes of `value`.
std::uint64_t HashStep(std::uint64_t hash, std::uint64_t value);
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

template <typename Payload>
class EventQueue
{
  public:
    SimTime Now() const { return m_now; }
    std::size_t Pending() const { return m_heap.size(); }

    /// Continuous scenarios always have a next event; running dry before
    /// the horizon then means a generator stopped rescheduling itself.
    void SetContinuousSources(bool continuous) { m_continuous = continuous; }

    EventId Schedule(SimTime at, EventKind kind, Payload payload)
    {
        if (at < m_now)
        {
            throw SchedulingError("event " + std::string(ToString(kind)) + " scheduled at " +
                                  ToString(at) + " before clock " + ToString(m_now));
        }
        EventId id = m_nextSeq++;
        m_heap.push(Event<Payload>{at, id, kind, std::move(payload)});
        return id;
    }

    /// Processes every event with fire_at <= horizon, then advances the
    /// clock to the horizon.  The handler may schedule further events.
    template <typename Handler>
    RunReport RunUntil(SimTime horizon, Handler&& handler)
    {
        while (!m_heap.empty() && m_heap.top().fireAt <= horizon)
        {
            Event<Payload> ev = std::move(const_cast<Event<Payload>&>(m_heap.top()));
            m_heap.pop();
            if (ev.fireAt < m_now || (ev.fireAt == m_now && m_processed > 0 && ev.seq < m_lastSeq))
            {
                throw SchedulingError("event processed out of order at " + ToString(ev.fireAt));
            }
            m_now = ev.fireAt;
            m_lastSeq = ev.seq;
            ++m_processed;
            m_hash = HashStep(m_hash, ev.fireAt.Ns());
            m_hash = HashStep(m_hash, ev.seq);
            m_hash = HashStep(m_hash, static_cast<std::uint64_t>(ev.kind));
            handler(ev);
        }
        if (m_heap.empty() && m_continuous && m_now < horizon)
        {
            throw SchedulingError("event queue exhausted at " + ToString(m_now) +
                                  " before horizon " + ToString(horizon));
        }
        if (m_now < horizon)
        {
            m_now = horizon;
        }
        return RunReport{m_now, m_processed, m_hash};
    }

  private:
    struct Later
    {
        bool operator()(const Event<Payload>& a, const Event<Payload>& b) const
        {
            if (a.fireAt != b.fireAt)
            {
                return a.fireAt > b.fireAt;
            }
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event<Payload>, std::vector<Event<Payload>>, Later> m_heap;
    SimTime m_now;
    std::uint64_t m_nextSeq{0};
    std::uint64_t m_lastSeq{0};
    std::uint64_t m_processed{0};
    std::uint64_t m_hash{kFnvOffset};
    bool m_continuous{false};
};

} // namespace ctisim

#endif
