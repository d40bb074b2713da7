// One simulation run: a PON with its ONUs and OLT(s), the RAN that feeds
// the fronthaul TCONT, the CTI bus and the traffic sources, all driven by a
// single event queue.
#ifndef CTISIM_SIMULATION_H
#define CTISIM_SIMULATION_H

#include "ctisim/bw-map.h"
#include "ctisim/cti.h"
#include "ctisim/event-queue.h"
#include "ctisim/metrics.h"
#include "ctisim/olt.h"
#include "ctisim/scenario.h"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ctisim {

/// Raised when a run breaks one of the model invariants checked on the fly.
class InvariantViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

struct RunOptions
{
    std::uint32_t runId{0};
    /// Keep the per-packet ledger in the result.
    bool keepLedger{false};
    /// Keep the encoded BwMap of every frame (for paired-run comparison).
    bool keepMaps{false};
};

struct InvariantReport
{
    std::uint64_t framesValidated{0};
    std::uint64_t arrivalFormulaChecks{0};
    std::uint64_t arrivalFormulaMismatches{0};
    std::uint64_t forecastsChecked{0};
    std::uint64_t lateForecasts{0};
    std::vector<FlowConservation> conservation;
};

struct RunResult
{
    RunReport report;
    RunStatistics stats;
    InvariantReport invariants;
    std::vector<CtiTraceRow> ctiTrace;
    std::vector<OltCounters> oltCounters;
    /// Per frame, the concatenated encodings of every OLT's map.
    std::vector<std::vector<std::uint8_t>> maps;
    std::shared_ptr<const MetricsLedger> ledger;
};

RunResult RunSimulation(const Scenario& scenario, DbaMode mode, const RunOptions& options = {});

/// Name of the flow carried by the fronthaul TCONT.
inline constexpr const char* kFronthaulFlow = "fronthaul";

} // namespace ctisim

#endif
