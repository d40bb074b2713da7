#include "ctisim/simulation.h"

#include "ctisim/cascade.h"
#include "ctisim/mac-scheduler.h"
#include "ctisim/onu.h"
#include "ctisim/traffic.h"

#include <deque>
#include <map>
#include <string>

namespace ctisim {

namespace {

constexpr std::uint32_t kControlStream = 100;
constexpr std::uint32_t kBackgroundStreamBase = 200;
constexpr std::uint32_t kBusStream = 1000;

struct SimEvent
{
    std::uint64_t a{0};
    std::uint64_t b{0};
    GrantEntry entry;
    std::uint32_t olt{0};
};

SimEvent
Scalar(std::uint64_t a, std::uint64_t b = 0)
{
    SimEvent ev;
    ev.a = a;
    ev.b = b;
    return ev;
}

struct TcontSlot
{
    std::unique_ptr<TcontQueue> queue;
    FlowId flow{0};
    std::uint32_t olt{0};
};

struct PendingBatch
{
    UlGrant grant;
    FronthaulBatch batch;
};

class Simulation
{
  public:
    Simulation(const Scenario& scenario, DbaMode mode, const RunOptions& options);
    RunResult Run();

  private:
    void AddTcont(AllocId alloc, std::uint32_t onu, PriorityClass cls, std::uint64_t limit, const std::string& name);
    void AddSource(const SourceSpec& spec, std::uint32_t stream);
    void Enqueue(AllocId alloc, std::uint32_t size, SimTime createdAt);
    void Handle(const Event<SimEvent>& ev);
    void OnArrival(const SimEvent& p);
    void OnSlotTick(std::uint64_t slot);
    void OnUeTxReady();
    void OnCtiDelivery();
    void OnBroadcast(std::uint64_t frame);
    void OnBurstStart(const SimEvent& p);

    const Scenario& m_scenario;
    DbaMode m_mode;
    RunOptions m_options;
    std::uint32_t m_capacity;
    UpstreamTiming m_timing;
    FrameLayout m_layout;
    EventQueue<SimEvent> m_queue;
    std::shared_ptr<MetricsLedger> m_ledger;
    std::map<AllocId, TcontSlot> m_tconts;
    std::vector<Olt> m_olts;
    std::vector<TrafficSource> m_sources;
    std::vector<std::uint64_t> m_ueBuffer;
    MacScheduler m_mac;
    RuMap m_ruMap;
    CtiTranslator m_translator;
    CtiBus m_bus;
    std::deque<PendingBatch> m_batches;
    std::deque<CtiMessage> m_forecasts;
    InvariantReport m_invariants;
    std::vector<std::vector<std::uint8_t>> m_maps;
};

Simulation::Simulation(const Scenario& scenario, DbaMode mode, const RunOptions& options)
    : m_scenario(scenario),
      m_mode(mode),
      m_options(options),
      m_capacity(scenario.pon.CapacityBytes()),
      m_timing{scenario.pon.lineRateBps, scenario.pon.frameDuration, scenario.pon.upstreamPropagation},
      m_layout{scenario.pon.burstOverheadBytes, scenario.pon.guardBytes},
      m_ledger(std::make_shared<MetricsLedger>()),
      m_ueBuffer(scenario.ran.ueCount, 0),
      m_mac(scenario.ran.mac),
      m_ruMap(scenario.BuildRuMap()),
      m_translator(m_ruMap, scenario.ran.slots),
      m_bus(scenario.cti.bus, RngStream(RngState{scenario.seed, kBusStream}))
{
    const PonParams& pon = scenario.pon;
    const TrafficParams& tr = scenario.traffic;

    AddTcont(kFronthaulAllocBase, 0, PriorityClass::FronthaulUser, pon.bufferLimitFronthaulBytes, kFronthaulFlow);
    if (pon.controlTcont)
    {
        AddTcont(kControlAllocId, 0, PriorityClass::Control, pon.bufferLimitControlBytes, "control");
    }
    for (std::uint32_t i = 1; i <= tr.backgroundOnus; ++i)
    {
        AddTcont(static_cast<AllocId>(kBackgroundAllocBase + i), i, PriorityClass::Background,
                 pon.bufferLimitBackgroundBytes, "background-" + std::to_string(i));
    }

    DbaConfig dba{m_layout, pon.pollGrantBytes, pon.pollingPeriodFrames, pon.lineRateBps, pon.frameDuration};
    std::vector<std::vector<AllocRegistration>> regs(pon.oltCount);
    for (const auto& [alloc, slot] : m_tconts)
    {
        regs[slot.olt].push_back(AllocRegistration{alloc, slot.queue->GetClass()});
    }
    m_olts.reserve(pon.oltCount);
    for (std::uint32_t o = 0; o < pon.oltCount; ++o)
    {
        m_olts.emplace_back(o, mode, dba, regs[o]);
    }

    for (std::uint32_t ue = 0; ue < scenario.ran.ueCount; ++ue)
    {
        SourceSpec spec;
        spec.kind = tr.ueKind;
        spec.rateFraction = tr.ueFraction / scenario.ran.ueCount;
        spec.packetSizeBytes = tr.uePacketBytes;
        spec.target = SourceTarget::UeBuffer;
        spec.targetId = ue;
        AddSource(spec, ue + 1);
    }
    if (pon.controlTcont)
    {
        SourceSpec spec;
        spec.rateFraction = tr.controlFraction;
        spec.packetSizeBytes = tr.controlPacketBytes;
        spec.targetId = kControlAllocId;
        AddSource(spec, kControlStream);
    }
    for (std::uint32_t i = 1; i <= tr.backgroundOnus; ++i)
    {
        SourceSpec spec;
        spec.kind = tr.backgroundKind;
        spec.rateFraction = tr.backgroundFraction / tr.backgroundOnus;
        spec.packetSizeBytes = tr.backgroundPacketBytes;
        spec.targetId = kBackgroundAllocBase + i;
        AddSource(spec, kBackgroundStreamBase + i);
    }

    // Rough packet count, to avoid regrowing the ledger mid-run.
    double packets = 0;
    for (const auto& src : m_sources)
    {
        if (src.Spec().target == SourceTarget::Tcont && src.MeanSpacingNs() > 0)
        {
            packets += static_cast<double>(scenario.duration.Ns()) / src.MeanSpacingNs();
        }
    }
    Ratio fh = tr.ueFraction * scenario.ran.slots.fronthaulOverheadFactor;
    packets += fh.ToDouble() * static_cast<double>(pon.lineRateBps) / 8.0 *
               (static_cast<double>(scenario.duration.Ns()) / 1e9) / scenario.ran.mtuBytes;
    m_ledger->Reserve(static_cast<std::size_t>(packets * 1.05) + 1024);
}

void
Simulation::AddTcont(AllocId alloc, std::uint32_t onu, PriorityClass cls, std::uint64_t limit, const std::string& name)
{
    TcontSlot slot;
    slot.queue = std::make_unique<TcontQueue>(alloc, onu, cls, limit);
    slot.flow = m_ledger->RegisterFlow(FlowInfo{name, cls, alloc});
    slot.olt = onu % m_scenario.pon.oltCount;
    m_tconts.emplace(alloc, std::move(slot));
}

void
Simulation::AddSource(const SourceSpec& spec, std::uint32_t stream)
{
    m_sources.emplace_back(spec, m_scenario.pon.lineRateBps, RngStream(RngState{m_scenario.seed, stream}));
}

void
Simulation::Enqueue(AllocId alloc, std::uint32_t size, SimTime createdAt)
{
    TcontSlot& slot = m_tconts.at(alloc);
    const SimTime now = m_queue.Now();
    if (slot.queue->OccupancyBytes() + size > slot.queue->GetBufferLimit())
    {
        m_ledger->RecordDrop(slot.flow, size, createdAt, now);
        return;
    }
    std::uint32_t id = m_ledger->RecordEnqueue(slot.flow, size, createdAt, now);
    slot.queue->Enqueue(Packet{id, size, createdAt, now}, now);
}

void
Simulation::OnArrival(const SimEvent& p)
{
    TrafficSource& src = m_sources[p.a];
    const auto size = static_cast<std::uint32_t>(p.b);
    if (src.Spec().target == SourceTarget::UeBuffer)
    {
        m_ueBuffer[src.Spec().targetId] += size;
    }
    else
    {
        Enqueue(static_cast<AllocId>(src.Spec().targetId), size, m_queue.Now());
    }
    if (auto next = src.NextArrival())
    {
        m_queue.Schedule(next->at, EventKind::PacketArrival, Scalar(p.a, next->sizeBytes));
    }
}

void
Simulation::OnSlotTick(std::uint64_t slot)
{
    const SlotConfig& slots = m_scenario.ran.slots;
    std::vector<UeDemand> demands;
    for (std::uint32_t ue = 0; ue < m_ueBuffer.size(); ++ue)
    {
        if (m_ueBuffer[ue] > 0)
        {
            demands.push_back(UeDemand{ue, m_ueBuffer[ue]});
        }
    }
    for (const UlGrant& grant : m_mac.Schedule(slot, demands, slots))
    {
        m_ueBuffer[grant.ueId] -= grant.tbsBytes;
        FronthaulBatch batch = UeTransmit(grant, slots, m_scenario.ran.mtuBytes);
        m_queue.Schedule(batch.arrival, EventKind::UeTxReady, Scalar(grant.grantId));
        m_batches.push_back(PendingBatch{grant, std::move(batch)});

        if (m_mode != DbaMode::Cooperative)
        {
            continue;
        }
        std::optional<CtiMessage> msg = m_translator.Translate(grant);
        if (!msg)
        {
            continue;
        }
        if (auto at = m_bus.Publish(*msg))
        {
            m_queue.Schedule(*at, EventKind::CtiDelivery, Scalar(grant.grantId));
            m_forecasts.push_back(*msg);
        }
    }
    m_queue.Schedule(slots.slotDuration * (slot + 1), EventKind::SlotTick, Scalar(slot + 1));
}

void
Simulation::OnUeTxReady()
{
    PendingBatch pending = std::move(m_batches.front());
    m_batches.pop_front();
    const SlotConfig& slots = m_scenario.ran.slots;
    const UlGrant& g = pending.grant;

    SimTime closedForm = SimTime(g.issuedAt.Ns() + std::uint64_t{g.k2Slots} * slots.slotDuration.Ns() +
                                 slots.ueProcessingDelay.Ns() + slots.ruProcessingDelay.Ns());
    ++m_invariants.arrivalFormulaChecks;
    if (closedForm != m_queue.Now())
    {
        ++m_invariants.arrivalFormulaMismatches;
    }

    AllocId alloc = m_ruMap.AllocFor(g.ueId).value_or(kFronthaulAllocBase);
    for (std::uint32_t size : pending.batch.packetSizes)
    {
        Enqueue(alloc, size, g.issuedAt);
    }
}

void
Simulation::OnCtiDelivery()
{
    CtiMessage msg = m_forecasts.front();
    m_forecasts.pop_front();
    const SlotConfig& slots = m_scenario.ran.slots;
    SimTime lead = slots.slotDuration * m_scenario.ran.mac.k2Slots + slots.ueProcessingDelay + slots.ruProcessingDelay;
    ++m_invariants.forecastsChecked;
    if (m_scenario.cti.bus.deliveryLatency < lead && m_queue.Now() >= msg.expectedArrival)
    {
        ++m_invariants.lateForecasts;
    }
    auto it = m_tconts.find(msg.allocId);
    if (it != m_tconts.end())
    {
        m_olts[it->second.olt].OnForecast(msg);
    }
}

void
Simulation::OnBroadcast(std::uint64_t frame)
{
    const SimTime now = m_queue.Now();
    std::vector<std::uint32_t> shares(m_olts.size(), m_capacity);
    if (m_olts.size() > 1)
    {
        OltRole master{0, CascadeRole::Master, {}, 0};
        std::vector<OltDemandSummary> demands;
        for (const auto& olt : m_olts)
        {
            if (olt.Id() != 0)
            {
                master.cascadePeers.push_back(olt.Id());
            }
            demands.push_back(OltDemandSummary{olt.Id(), olt.Need(frame), 0});
        }
        auto alloc = CascadeAllocate(master, demands, m_capacity, m_scenario.pon.cascadeMinShareBytes);
        std::uint64_t total = 0;
        for (std::size_t o = 0; o < m_olts.size(); ++o)
        {
            shares[o] = alloc.at(m_olts[o].Id());
            total += shares[o];
        }
        if (total > m_capacity)
        {
            throw InvariantViolation("cascade shares exceed capacity in frame " + std::to_string(frame));
        }
    }

    std::vector<std::uint8_t> image;
    for (std::size_t o = 0; o < m_olts.size(); ++o)
    {
        BwMap map = m_olts[o].BuildFrame(frame, shares[o], now);
        std::string err = ValidateBwMap(map, shares[o], m_layout);
        if (!err.empty())
        {
            throw InvariantViolation("frame " + std::to_string(frame) + ", OLT " + std::to_string(o) + ": " + err);
        }
        ++m_invariants.framesValidated;
        if (m_options.keepMaps)
        {
            auto bytes = EncodeBwMap(map);
            image.insert(image.end(), bytes.begin(), bytes.end());
        }
        for (const auto& e : map.entries)
        {
            SimTime tx = GrantTxTime(frame, e, m_timing);
            if (tx < now + m_scenario.pon.downstreamPropagation)
            {
                throw InvariantViolation("grant starts before its map reaches the ONU");
            }
            m_queue.Schedule(tx, EventKind::BurstStart, SimEvent{frame, 0, e, static_cast<std::uint32_t>(o)});
        }
    }
    if (m_options.keepMaps)
    {
        m_maps.push_back(std::move(image));
    }
    m_queue.Schedule(m_timing.frameDuration * frame, EventKind::BwMapBroadcast, Scalar(frame + 1));
}

void
Simulation::OnBurstStart(const SimEvent& p)
{
    auto it = m_tconts.find(p.entry.allocId);
    TcontQueue* q = it == m_tconts.end() ? nullptr : it->second.queue.get();
    Burst burst = ExecuteGrant(p.a, p.entry, q, m_timing);
    for (const auto& sent : burst.sent)
    {
        m_ledger->MarkGranted(sent.packet.recordId, burst.txStart);
        m_ledger->MarkDelivered(sent.packet.recordId, sent.deliveredAt);
    }
    LedgerCounters& c = m_ledger->Counters();
    c.wastedGrantBytes += burst.wastedBytes;
    if (burst.unregistered)
    {
        ++c.unregisteredGrants;
    }
    if (burst.report)
    {
        m_queue.Schedule(burst.arrivalAtOlt, EventKind::DbruReport,
                         SimEvent{burst.report->occupancyBytes, burst.report->reportedAt.Ns(), p.entry, p.olt});
    }
}

void
Simulation::Handle(const Event<SimEvent>& ev)
{
    switch (ev.kind)
    {
    case EventKind::PacketArrival:
        OnArrival(ev.payload);
        break;
    case EventKind::SlotTick:
        OnSlotTick(ev.payload.a);
        break;
    case EventKind::UeTxReady:
        OnUeTxReady();
        break;
    case EventKind::CtiDelivery:
        OnCtiDelivery();
        break;
    case EventKind::BwMapBroadcast:
        OnBroadcast(ev.payload.a);
        break;
    case EventKind::BurstStart:
        OnBurstStart(ev.payload);
        break;
    case EventKind::DbruReport:
        m_olts[ev.payload.olt].OnReport(
            DbruReport{ev.payload.entry.allocId, ev.payload.a, SimTime(ev.payload.b)});
        break;
    case EventKind::BurstEnd:
        break;
    }
}

RunResult
Simulation::Run()
{
    m_queue.SetContinuousSources(true);
    for (std::size_t i = 0; i < m_sources.size(); ++i)
    {
        if (auto first = m_sources[i].NextArrival())
        {
            m_queue.Schedule(first->at, EventKind::PacketArrival, Scalar(i, first->sizeBytes));
        }
    }
    m_queue.Schedule(SimTime(), EventKind::BwMapBroadcast, Scalar(1));
    m_queue.Schedule(SimTime(), EventKind::SlotTick, Scalar(0));

    const SimTime horizon = m_scenario.duration;
    RunResult result;
    result.report = m_queue.RunUntil(horizon, [this](const Event<SimEvent>& ev) { Handle(ev); });

    LedgerCounters& c = m_ledger->Counters();
    for (const auto& olt : m_olts)
    {
        c.forecastDeferrals += olt.Counters().forecastDeferrals;
        c.staleForecasts += olt.Counters().staleForecasts;
        result.oltCounters.push_back(olt.Counters());
    }
    c.mappingMisses = m_translator.MappingMisses();
    c.arrivalFormulaMismatches = m_invariants.arrivalFormulaMismatches;
    c.lateForecasts = m_invariants.lateForecasts;

    RunSummary summary;
    summary.runId = m_options.runId;
    summary.mode = ToString(m_mode);
    summary.sweepFraction = m_scenario.traffic.backgroundFraction;
    summary.seed = m_scenario.seed;
    summary.capacityBytesPerFrame = m_capacity;
    summary.wastedGrantBytes = c.wastedGrantBytes;
    summary.forecastDeferrals = c.forecastDeferrals;
    summary.staleForecasts = c.staleForecasts;
    summary.mappingMisses = c.mappingMisses;

    MeasurementWindow window{m_scenario.warmup, horizon - m_scenario.cooldown, horizon};
    result.stats = Finalize(*m_ledger, window, summary);
    m_invariants.conservation = Conservation(*m_ledger, horizon);
    result.invariants = m_invariants;
    result.ctiTrace = m_bus.Trace();
    result.maps = std::move(m_maps);
    if (m_options.keepLedger)
    {
        result.ledger = m_ledger;
    }
    return result;
}

} // namespace

RunResult
RunSimulation(const Scenario& scenario, DbaMode mode, const RunOptions& options)
{
    ValidateScenario(scenario);
    Simulation sim(scenario, mode, options);
    return sim.Run();
}

} // namespace ctisim
