#include "baseline-oracle.h"
#include "ctisim/bw-map.h"
#include "ctisim/cascade.h"
#include "ctisim/dba.h"
#include "ctisim/olt.h"
#include "ctisim/onu.h"
#include "ctisim/rng.h"
#include "ctisim/tcont-queue.h"

#include "doctest.h"

#include <algorithm>
#include <map>
#include <optional>

using namespace ctisim;
using ctisim::testing::OracleDba;

namespace {

constexpr std::uint32_t kCapacity = 155520;

DbaConfig
Config(std::uint32_t period = 1)
{
    DbaConfig c;
    c.pollingPeriodFrames = period;
    return c;
}

Packet
Pkt(std::uint32_t id, std::uint32_t size)
{
    return Packet{id, size, SimTime(), SimTime()};
}

CtiMessage
Forecast(AllocId alloc, SimTime arrival, std::uint64_t bytes)
{
    CtiMessage m;
    m.allocId = alloc;
    m.expectedArrival = arrival;
    m.expectedBytes = bytes;
    return m;
}

} // namespace

TEST_SUITE("pon")
{
    TEST_CASE("enqueue_upstream: occupancy, overflow, FIFO")
    {
        TcontQueue q(1024, 0, PriorityClass::FronthaulUser, 3000);
        CHECK(q.Enqueue(Pkt(1, 1500), SimTime::Microseconds(3)) == EnqueueResult::Accepted);
        CHECK(q.OccupancyBytes() == 1500);
        CHECK(q.Front().enqueuedAt == SimTime::Microseconds(3));
        CHECK(q.Enqueue(Pkt(2, 1500), SimTime()) == EnqueueResult::Accepted);
        CHECK(q.OccupancyBytes() == 3000);
        CHECK(q.Enqueue(Pkt(3, 1), SimTime()) == EnqueueResult::Dropped);
        CHECK(q.OccupancyBytes() == 3000);
        CHECK(q.PopFront().recordId == 1);
        CHECK(q.PopFront().recordId == 2);
        CHECK(q.Empty());
        CHECK(q.OccupancyBytes() == 0);
        CHECK_THROWS_AS(q.Enqueue(Pkt(4, 0), SimTime()), std::invalid_argument);
    }

    TEST_CASE("generate_dbru reports current occupancy")
    {
        TcontQueue q(7, 0, PriorityClass::Background, 1 << 20);
        CHECK(GenerateDbru(q, SimTime()).occupancyBytes == 0);
        for (std::uint32_t i = 0; i < 8; ++i)
        {
            q.Enqueue(Pkt(i, 1500), SimTime());
        }
        DbruReport r = GenerateDbru(q, SimTime::Microseconds(9));
        CHECK(r.occupancyBytes == 12000);
        CHECK(r.allocId == 7);
        CHECK(r.reportedAt == SimTime::Microseconds(9));
    }

    TEST_CASE("dbru sampled after a partial drain")
    {
        TcontQueue q(7, 0, PriorityClass::Background, 1 << 20);
        for (std::uint32_t s : {2000u, 2000u, 4000u, 4000u})
        {
            q.Enqueue(Pkt(0, s), SimTime());
        }
        UpstreamTiming t;
        Burst b = ExecuteGrant(3, GrantEntry{7, 64, 4000, true}, &q, t);
        REQUIRE(b.report);
        CHECK(b.usedBytes == 4000);
        CHECK(b.report->occupancyBytes == 8000);
        CHECK(b.report->reportedAt == b.txStart);
    }

    TEST_CASE("execute_bwmap: no fragmentation, waste, exact fit")
    {
        UpstreamTiming t;
        t.upstreamPropagation = SimTime::Microseconds(25);
        TcontQueue q(9, 0, PriorityClass::Background, 1 << 20);
        for (std::uint32_t i = 0; i < 3; ++i)
        {
            q.Enqueue(Pkt(i, 1500), SimTime());
        }
        Burst b = ExecuteGrant(2, GrantEntry{9, 64, 3000, false}, &q, t);
        CHECK(b.sent.size() == 2);
        CHECK(q.PacketCount() == 1);
        CHECK(b.wastedBytes == 0);
        CHECK(b.txStart == SimTime::Microseconds(250) + BytesToTime(64, t.lineRateBps));
        CHECK(b.sent[0].deliveredAt == b.txStart + BytesToTime(1500, t.lineRateBps) + SimTime::Microseconds(25));
        CHECK(b.sent[1].deliveredAt == b.txStart + BytesToTime(3000, t.lineRateBps) + SimTime::Microseconds(25));

        TcontQueue empty(9, 0, PriorityClass::Background, 1 << 20);
        Burst w = ExecuteGrant(2, GrantEntry{9, 64, 3000, false}, &empty, t);
        CHECK(w.wastedBytes == 3000);
        CHECK(w.sent.empty());

        Burst last = ExecuteGrant(3, GrantEntry{9, 64, 1500, false}, &q, t);
        CHECK(last.sent.size() == 1);
        CHECK(q.OccupancyBytes() == 0);
        CHECK(last.wastedBytes == 0);
    }

    TEST_CASE("grant to an unregistered alloc is wasted and flagged")
    {
        TcontQueue q(1, 0, PriorityClass::Background, 1 << 20);
        std::map<AllocId, TcontQueue*> queues{{1, &q}};
        BwMap map{0, {GrantEntry{1, 64, 100, false}, GrantEntry{55, 260, 400, false}}, SimTime()};
        auto bursts = ExecuteBwMap(map, queues, UpstreamTiming{});
        REQUIRE(bursts.size() == 2);
        CHECK_FALSE(bursts[0].unregistered);
        CHECK(bursts[1].unregistered);
        CHECK(bursts[1].wastedBytes == 400);
    }

    TEST_CASE("packets that arrive after the burst starts wait")
    {
        TcontQueue q(1, 0, PriorityClass::Background, 1 << 20);
        q.Enqueue(Pkt(0, 100), SimTime::Microseconds(300));
        Burst b = ExecuteGrant(2, GrantEntry{1, 64, 1000, false}, &q, UpstreamTiming{});
        CHECK(b.sent.empty());
        CHECK(q.PacketCount() == 1);
    }

    TEST_CASE("bwmap validation")
    {
        FrameLayout l;
        CHECK(ValidateBwMap(BwMap{0, {GrantEntry{1, 64, 100, false}, GrantEntry{2, 260, 100, false}}, {}}, 1000, l).empty());
        CHECK_FALSE(ValidateBwMap(BwMap{0, {GrantEntry{1, 64, 100, false}, GrantEntry{2, 250, 100, false}}, {}}, 1000, l).empty());
        CHECK_FALSE(ValidateBwMap(BwMap{0, {GrantEntry{1, 64, 0, false}}, {}}, 1000, l).empty());
        CHECK_FALSE(ValidateBwMap(BwMap{0, {GrantEntry{1, 10, 100, false}}, {}}, 1000, l).empty());
        CHECK_FALSE(ValidateBwMap(BwMap{0, {GrantEntry{1, 64, 905, false}}, {}}, 1000, l).empty());
        CHECK(ValidateBwMap(BwMap{0, {GrantEntry{1, 64, 904, false}}, {}}, 1000, l).empty());
        CHECK(ConsumedBytes(BwMap{0, {GrantEntry{1, 64, 904, false}}, {}}, l) == 1000);
        CHECK(EncodeBwMap(BwMap{3, {GrantEntry{1, 64, 4, true}}, {}}).size() > 8);
    }

    TEST_CASE("baseline: idle PON gets polling grants only")
    {
        BaselineDba dba(Config(), {{10, PriorityClass::Background}, {11, PriorityClass::Background}});
        BwMap m = dba.Build(1, {}, kCapacity);
        REQUIRE(m.entries.size() == 2);
        for (const auto& e : m.entries)
        {
            CHECK(e.grantBytes == 4);
            CHECK(e.requestDbru);
        }
        CHECK(m.entries[0].startOffsetBytes == 64);
        CHECK(m.entries[1].startOffsetBytes == 64 + 4 + 32 + 64);
    }

    TEST_CASE("baseline: one report of 10000 bytes")
    {
        BaselineDba dba(Config(), {{10, PriorityClass::Background}});
        BwMap m = dba.Build(1, {{10, 10000}}, kCapacity);
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].grantBytes == 10000);
        CHECK(ConsumedBytes(m, FrameLayout{}) == 10000 + 64 + 32);
    }

    TEST_CASE("baseline: two reports of 100000 share the frame equally")
    {
        BaselineDba dba(Config(), {{10, PriorityClass::Background}, {11, PriorityClass::Background}});
        BwMap m = dba.Build(1, {{10, 100000}, {11, 100000}}, kCapacity);
        REQUIRE(m.entries.size() == 2);
        CHECK(m.entries[0].grantBytes == 77760 - 96);
        CHECK(m.entries[1].grantBytes == 77760 - 96);
        CHECK(ConsumedBytes(m, FrameLayout{}) == kCapacity);
        CHECK(ValidateBwMap(m, kCapacity, FrameLayout{}).empty());
    }

    TEST_CASE("baseline: polling period")
    {
        BaselineDba dba(Config(3), {{10, PriorityClass::Background}});
        std::vector<bool> polled;
        for (std::uint64_t f = 1; f <= 7; ++f)
        {
            polled.push_back(!dba.Build(f, {}, kCapacity).entries.empty());
        }
        CHECK(polled == std::vector<bool>{true, false, false, true, false, false, true});
    }

    TEST_CASE("baseline: control is placed ahead of background")
    {
        BaselineDba dba(Config(), {{5, PriorityClass::Background}, {9, PriorityClass::Control}, {7, PriorityClass::FronthaulUser}});
        for (std::uint64_t f = 1; f <= 6; ++f)
        {
            BwMap m = dba.Build(f, {{5, 90000}, {7, 90000}, {9, 3000}}, kCapacity);
            REQUIRE_FALSE(m.entries.empty());
            CHECK(m.entries.front().allocId == 9);
            CHECK(m.entries.front().grantBytes == 3000);
            CHECK(ValidateBwMap(m, kCapacity, FrameLayout{}).empty());
        }
    }

    TEST_CASE("baseline equals the brute-force oracle on a seeded grid")
    {
        const std::uint64_t grid[] = {0, 1, 3, 4, 5, 1499, 1500, 10000, 50001, 77760, 100000, 155520, 400000};
        RngStream rng(RngState{2024, 0});
        int instances = 0;
        for (int trial = 0; trial < 300; ++trial)
        {
            std::size_t n = 1 + rng.NextU64() % 3;
            std::vector<AllocRegistration> regs;
            for (std::size_t i = 0; i < n; ++i)
            {
                auto cls = static_cast<PriorityClass>(rng.NextU64() % 3);
                regs.push_back({static_cast<AllocId>(100 + 7 * i + rng.NextU64() % 5), cls});
            }
            std::uint32_t period = 1 + rng.NextU64() % 3;
            std::uint32_t capacity = (rng.NextU64() % 2) ? kCapacity : 400 + 4 * (rng.NextU64() % 200);
            DbaConfig cfg = Config(period);
            BaselineDba dba(cfg, regs);
            OracleDba oracle(regs, period, cfg.pollGrantBytes);
            std::size_t frames = 1 + rng.NextU64() % 10;
            for (std::uint64_t f = 1; f <= frames; ++f)
            {
                DemandMap demand;
                for (const auto& r : regs)
                {
                    std::uint64_t d = grid[rng.NextU64() % std::size(grid)];
                    if (d > 0)
                    {
                        demand[r.allocId] = d;
                    }
                }
                BwMap m = dba.Build(f, demand, capacity);
                auto expect = oracle.Frame(f, demand, capacity);
                INFO("trial " << trial << " frame " << f);
                CHECK(m.entries == expect);
                CHECK(ValidateBwMap(m, capacity, cfg.layout).empty());
                ++instances;
            }
        }
        CHECK(instances > 300);
    }

    TEST_CASE("oracle comparison over further seeds")
    {
        for (std::uint64_t seed : {1, 2, 3})
        {
            int mismatches = -1;
            CHECK(testing::CompareWithOracle(seed, 200, mismatches) > 200);
            CHECK(mismatches == 0);
        }
    }

    TEST_CASE("cooperative: forecast mid-frame is placed at its arrival offset")
    {
        CooperativeDba dba(Config(), {{1024, PriorityClass::FronthaulUser}});
        const std::uint64_t frame = 8;
        const SimTime arrival = SimTime::Microseconds(1000) + SimTime::Nanoseconds(62500);
        auto r = dba.Build(frame, {PendingForecast{Forecast(1024, arrival, 12000), 0, false}}, {}, kCapacity);
        REQUIRE(r.map.entries.size() >= 1);
        const GrantEntry& e = r.map.entries[0];
        CHECK(e.allocId == 1024);
        CHECK(e.grantBytes >= 12000);
        CHECK(e.startOffsetBytes % 4 == 0);
        CHECK(e.startOffsetBytes == 77760);
        UpstreamTiming t;
        CHECK(GrantTxTime(frame, e, t) >= arrival);
        CHECK(GrantTxTime(frame, GrantEntry{1024, e.startOffsetBytes - 4, 4, false}, t) < arrival);
        CHECK(ValidateBwMap(r.map, kCapacity, FrameLayout{}).empty());
        CHECK(r.placed == 1);
        CHECK(r.deferrals == 0);
    }

    TEST_CASE("cooperative: fronthaul first, background takes the rest")
    {
        CooperativeDba dba(Config(), {{1024, PriorityClass::FronthaulUser}, {1101, PriorityClass::Background}});
        auto r = dba.Build(4, {PendingForecast{Forecast(1024, SimTime::Microseconds(500), 12000), 0, false}},
                           {{1101, 150000}}, kCapacity);
        REQUIRE(r.map.entries.size() == 3);
        CHECK(r.map.entries[0].allocId == 1024);
        CHECK(r.map.entries[0].grantBytes == 12000);
        CHECK(r.map.entries[0].startOffsetBytes == 64);
        const GrantEntry* bg = nullptr;
        for (const auto& e : r.map.entries)
        {
            if (e.allocId == 1101)
            {
                bg = &e;
            }
        }
        REQUIRE(bg);
        CHECK(bg->grantBytes < 150000);
        CHECK(ConsumedBytes(r.map, FrameLayout{}) == kCapacity);
        CHECK(ValidateBwMap(r.map, kCapacity, FrameLayout{}).empty());
    }

    TEST_CASE("cooperative without forecasts equals baseline")
    {
        std::vector<AllocRegistration> regs{{1000, PriorityClass::Control},
                                            {1024, PriorityClass::FronthaulUser},
                                            {1101, PriorityClass::Background}};
        BaselineDba base(Config(2), regs);
        CooperativeDba coop(Config(2), regs);
        RngStream rng(RngState{5, 5});
        for (std::uint64_t f = 1; f <= 50; ++f)
        {
            DemandMap d{{1000, rng.NextU64() % 2000}, {1024, rng.NextU64() % 90000}, {1101, rng.NextU64() % 200000}};
            CHECK(EncodeBwMap(coop.Build(f, {}, d, kCapacity).map) == EncodeBwMap(base.Build(f, d, kCapacity)));
        }
    }

    TEST_CASE("cooperative: oversubscribed forecasts roll oldest first")
    {
        CooperativeDba dba(Config(), {{1024, PriorityClass::FronthaulUser}, {1025, PriorityClass::FronthaulUser}});
        const SimTime start = SimTime::Microseconds(500);
        std::vector<PendingForecast> f{PendingForecast{Forecast(1025, start, 100000), 1, false},
                                       PendingForecast{Forecast(1024, start, 100000), 0, false}};
        auto r = dba.Build(4, f, {}, kCapacity);
        CHECK(r.placed == 1);
        CHECK(r.deferrals == 1);
        REQUIRE(r.deferred.size() == 1);
        CHECK(r.deferred[0].msg.allocId == 1025);
        CHECK(r.deferred[0].rolled);
        CHECK(r.map.entries[0].allocId == 1024);

        auto next = dba.Build(5, r.deferred, {}, kCapacity);
        CHECK(next.placed == 1);
        CHECK(next.map.entries[0].allocId == 1025);
        CHECK(next.map.entries[0].startOffsetBytes == 64);
    }

    TEST_CASE("cooperative: a forecast too large for any frame is dropped to baseline")
    {
        CooperativeDba dba(Config(), {{1024, PriorityClass::FronthaulUser}});
        auto r = dba.Build(4, {PendingForecast{Forecast(1024, SimTime::Microseconds(500), 200000), 0, false}}, {}, kCapacity);
        CHECK(r.placed == 0);
        CHECK(r.deferrals == 1);
        CHECK(r.deferred.empty());
    }

    TEST_CASE("olt: demand is net of grants committed after the report")
    {
        Olt olt(0, DbaMode::Baseline, Config(), {{1101, PriorityClass::Background}});
        olt.OnReport(DbruReport{1101, 10000, SimTime()});
        BwMap m = olt.BuildFrame(1, kCapacity, SimTime());
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].grantBytes == 10000);
        // Frame 2 is built before the frame-1 burst reports back.
        BwMap m2 = olt.BuildFrame(2, kCapacity, SimTime::Microseconds(125));
        REQUIRE(m2.entries.size() == 1);
        CHECK(m2.entries[0].grantBytes == 4);
        CHECK(olt.CurrentDemand().empty());
    }

    TEST_CASE("olt: a bare poll grant does not shrink the next data grant")
    {
        Olt olt(0, DbaMode::Baseline, Config(), {{1000, PriorityClass::Control}});
        olt.BuildFrame(1, kCapacity, SimTime());
        // Sampled before the frame-1 poll burst, which cannot carry 256 bytes.
        olt.OnReport(DbruReport{1000, 256, SimTime::Microseconds(100)});
        BwMap m = olt.BuildFrame(2, kCapacity, SimTime::Microseconds(125));
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].grantBytes == 256);
    }

    TEST_CASE("olt: stale forecasts are discarded and counted")
    {
        Olt olt(0, DbaMode::Cooperative, Config(), {{1024, PriorityClass::FronthaulUser}});
        olt.BuildFrame(5, kCapacity, SimTime::Microseconds(500));
        olt.OnForecast(Forecast(1024, SimTime::Microseconds(625), 1000));
        CHECK(olt.Counters().staleForecasts == 1);
        CHECK(olt.PendingForecasts() == 0);
        olt.OnForecast(Forecast(1024, SimTime::Microseconds(750), 1000));
        CHECK(olt.PendingForecasts() == 1);
        BwMap m = olt.BuildFrame(6, kCapacity, SimTime::Microseconds(625));
        CHECK(olt.PendingForecasts() == 0);
        CHECK(olt.Counters().forecastsPlaced == 1);
        CHECK(m.entries[0].grantBytes == 1000);
    }

    TEST_CASE("olt: baseline mode ignores forecasts")
    {
        Olt olt(0, DbaMode::Baseline, Config(), {{1024, PriorityClass::FronthaulUser}});
        olt.OnForecast(Forecast(1024, SimTime::Microseconds(750), 1000));
        CHECK(olt.PendingForecasts() == 0);
        CHECK(olt.Counters().forecastsReceived == 1);
    }

    TEST_CASE("cascade: floor for an idle slave, exact need for a busy one")
    {
        OltRole master{0, CascadeRole::Master, {1, 2}, 0};
        std::vector<OltDemandSummary> d{{0, 20000, 96}, {1, 0, 0}, {2, 30000, 96}};
        auto s = CascadeAllocate(master, d, kCapacity, 4096);
        CHECK(s.at(1) == 4096);
        CHECK(s.at(2) == 30096);
        CHECK(s.at(0) == kCapacity - 4096 - 30096);
    }

    TEST_CASE("cascade: symmetric demands get symmetric shares")
    {
        OltRole master{0, CascadeRole::Master, {1, 2}, 0};
        std::vector<OltDemandSummary> fit{{0, 0, 0}, {1, 25000, 96}, {2, 25000, 96}};
        auto a = CascadeAllocate(master, fit, kCapacity, 4096);
        CHECK(a.at(1) == a.at(2));
        std::vector<OltDemandSummary> over{{0, 0, 0}, {1, 200000, 96}, {2, 200000, 96}};
        auto b = CascadeAllocate(master, over, kCapacity, 4096);
        CHECK(b.at(1) == b.at(2));
        std::uint64_t sum = 0;
        for (auto& [id, share] : b)
        {
            CHECK(share >= 4096);
            sum += share;
        }
        CHECK(sum <= kCapacity);
    }

    TEST_CASE("cascade: single OLT gets the whole frame; slaves cannot allocate")
    {
        OltRole master{0, CascadeRole::Master, {}, 0};
        std::vector<OltDemandSummary> d{{0, 999999, 96}};
        CHECK(CascadeAllocate(master, d, kCapacity, 4096).at(0) == kCapacity);
        OltRole slave{1, CascadeRole::Slave, {0}, 0};
        CHECK_THROWS_AS(CascadeAllocate(slave, d, kCapacity, 4096), std::logic_error);
    }

    TEST_CASE("cascade: random demands never exceed capacity")
    {
        RngStream rng(RngState{9, 9});
        for (int i = 0; i < 500; ++i)
        {
            OltRole master{0, CascadeRole::Master, {1, 2, 3}, 0};
            std::vector<OltDemandSummary> d;
            for (std::uint32_t o = 0; o < 4; ++o)
            {
                d.push_back({o, rng.NextU64() % 120000, 96 * (rng.NextU64() % 4)});
            }
            auto s = CascadeAllocate(master, d, kCapacity, 4096);
            std::uint64_t sum = 0;
            for (auto& [id, share] : s)
            {
                CHECK(share >= 4096);
                sum += share;
            }
            CHECK(sum <= kCapacity);
        }
    }
}
