#include "ctisim/metrics.h"
#include "ctisim/rng.h"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace ctisim;

namespace {

MeasurementWindow
Window(std::uint64_t endUs)
{
    return MeasurementWindow{SimTime(), SimTime::Microseconds(endUs), SimTime::Microseconds(endUs)};
}

} // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("dbru_opportunity_time")
    {
        PacketRecord r;
        r.enqueuedAtOnu = SimTime::Microseconds(1000);
        CHECK_FALSE(DbruOpportunityTime(r));
        r.firstGrantAt = SimTime::Microseconds(1000);
        CHECK(DbruOpportunityTime(r) == SimTime());
        r.firstGrantAt = SimTime::Microseconds(1370);
        CHECK(DbruOpportunityTime(r) == SimTime::Microseconds(370));
        r.dropped = true;
        CHECK_FALSE(DbruOpportunityTime(r));
    }

    TEST_CASE("ledger rejects timestamps that go backwards")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        CHECK_THROWS_AS(l.RecordEnqueue(f, 100, SimTime::Microseconds(5), SimTime::Microseconds(4)), std::logic_error);
        auto id = l.RecordEnqueue(f, 100, SimTime::Microseconds(4), SimTime::Microseconds(5));
        CHECK_THROWS_AS(l.MarkGranted(id, SimTime::Microseconds(4)), std::logic_error);
        l.MarkGranted(id, SimTime::Microseconds(6));
        CHECK_THROWS_AS(l.MarkDelivered(id, SimTime::Microseconds(5)), std::logic_error);
        l.MarkDelivered(id, SimTime::Microseconds(8));
        CHECK(l.Record(id).Delivered());
    }

    TEST_CASE("finalize: nothing delivered")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        l.RecordDrop(f, 1500, SimTime(), SimTime::Microseconds(1));
        RunStatistics s = Finalize(l, Window(1000), RunSummary{});
        REQUIRE(s.flows.size() == 1);
        CHECK(s.flows[0].throughputBps == 0);
        CHECK(s.flows[0].droppedBytes == 1500);
        CHECK(s.flows[0].offeredBytes == 1500);
        CHECK_FALSE(s.flows[0].latencyMeanNs);
        CHECK_FALSE(s.flows[0].latencyP50Ns);
        CHECK_FALSE(s.flows[0].latencyP99Ns);
        CHECK_FALSE(s.flows[0].dbruOpportunityP50Ns);
    }

    TEST_CASE("finalize: one packet")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        auto id = l.RecordEnqueue(f, 1250, SimTime(), SimTime::Microseconds(100));
        l.MarkGranted(id, SimTime::Microseconds(150));
        l.MarkDelivered(id, SimTime::Microseconds(300));
        RunStatistics s = Finalize(l, Window(1000), RunSummary{});
        const FlowStats& fs = s.flows[0];
        CHECK(*fs.latencyP50Ns == 200000);
        CHECK(*fs.latencyP95Ns == 200000);
        CHECK(*fs.latencyP99Ns == 200000);
        CHECK(*fs.latencyMeanNs == doctest::Approx(200000.0));
        CHECK(*fs.dbruOpportunityP50Ns == 50000);
        // 1250 bytes over 1 ms.
        CHECK(fs.throughputBps == 10000000);
        CHECK(s.Flow("x") == &s.flows[0]);
        CHECK(s.Flow("y") == nullptr);
    }

    TEST_CASE("finalize: window and horizon")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        auto early = l.RecordEnqueue(f, 100, SimTime(), SimTime::Microseconds(5));
        l.MarkGranted(early, SimTime::Microseconds(20));
        l.MarkDelivered(early, SimTime::Microseconds(30));
        auto late = l.RecordEnqueue(f, 100, SimTime(), SimTime::Microseconds(50));
        l.MarkGranted(late, SimTime::Microseconds(60));
        l.MarkDelivered(late, SimTime::Microseconds(500));
        MeasurementWindow w{SimTime::Microseconds(10), SimTime::Microseconds(100), SimTime::Microseconds(200)};
        RunStatistics s = Finalize(l, w, RunSummary{});
        CHECK(s.flows[0].offeredBytes == 100);
        CHECK(s.flows[0].deliveredBytes == 0);
    }

    TEST_CASE("nearest-rank percentiles against a hand computation")
    {
        std::vector<std::uint64_t> v;
        RngStream rng(RngState{8, 8});
        for (int i = 0; i < 100; ++i)
        {
            v.push_back(1000 + rng.NextU64() % 100000);
        }
        std::sort(v.begin(), v.end());
        // Rank ceil(0.95 * 100) = 95, the 95th smallest value.
        CHECK(*NearestRank(v, 95) == v[94]);
        CHECK(*NearestRank(v, 50) == v[49]);
        CHECK(*NearestRank(v, 99) == v[98]);
        CHECK(*NearestRank(v, 100) == v[99]);
        std::vector<std::uint64_t> small{10, 20, 30, 40, 50, 60, 70};
        CHECK(*NearestRank(small, 50) == 40);
        CHECK(*NearestRank(small, 95) == 70);
        CHECK(*NearestRank(small, 1) == 10);
        CHECK_FALSE(NearestRank({}, 50));
    }

    TEST_CASE("finalize p95 over a synthetic ledger of 100 known latencies")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        std::vector<std::uint64_t> lat;
        for (std::uint64_t i = 0; i < 100; ++i)
        {
            std::uint64_t ns = 1000 + (i * 7919) % 100000;
            lat.push_back(ns);
            auto id = l.RecordEnqueue(f, 100, SimTime(i), SimTime(i));
            l.MarkGranted(id, SimTime(i));
            l.MarkDelivered(id, SimTime(i + ns));
        }
        std::sort(lat.begin(), lat.end());
        RunStatistics s = Finalize(l, Window(1000), RunSummary{});
        CHECK(*s.flows[0].latencyP95Ns == lat[94]);
        CHECK(*s.flows[0].latencyP50Ns == lat[49]);
        CHECK(*s.flows[0].latencyP99Ns == lat[98]);
    }

    TEST_CASE("conservation counts resident and in-flight bytes")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        auto a = l.RecordEnqueue(f, 100, SimTime(), SimTime());
        l.MarkGranted(a, SimTime(5));
        l.MarkDelivered(a, SimTime(10));
        auto b = l.RecordEnqueue(f, 200, SimTime(), SimTime());
        l.MarkGranted(b, SimTime(5));
        l.MarkDelivered(b, SimTime(1000));
        l.RecordEnqueue(f, 300, SimTime(), SimTime());
        l.RecordDrop(f, 400, SimTime(), SimTime());
        auto c = Conservation(l, SimTime(100));
        REQUIRE(c.size() == 1);
        CHECK(c[0].offeredBytes == 1000);
        CHECK(c[0].deliveredBytes == 100);
        CHECK(c[0].droppedBytes == 400);
        CHECK(c[0].residentBytes == 500);
        CHECK(c[0].Holds());
    }

    TEST_CASE("statistics are a pure function of the ledger")
    {
        MetricsLedger l;
        FlowId f = l.RegisterFlow({"x", PriorityClass::Background, 1});
        for (std::uint64_t i = 0; i < 50; ++i)
        {
            auto id = l.RecordEnqueue(f, 100 + i, SimTime(i), SimTime(i));
            l.MarkGranted(id, SimTime(i + 3));
            l.MarkDelivered(id, SimTime(i * i + 10));
        }
        auto a = Finalize(l, Window(10), RunSummary{});
        auto b = Finalize(l, Window(10), RunSummary{});
        CHECK(a.flows[0].deliveredBytes == b.flows[0].deliveredBytes);
        CHECK(*a.flows[0].latencyMeanNs == *b.flows[0].latencyMeanNs);
        CHECK(*a.flows[0].latencyP95Ns == *b.flows[0].latencyP95Ns);
    }
}
