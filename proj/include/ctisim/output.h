// CSV and text writers for run results.  Absent statistics are written as
// "null".
#ifndef CTISIM_OUTPUT_H
#define CTISIM_OUTPUT_H

#include "ctisim/metrics.h"
#include "ctisim/scenario.h"

#include <ostream>
#include <string>
#include <vector>

namespace ctisim {

void WritePacketsHeader(std::ostream& os);
/// Rows for one run, restricted to the fronthaul flow unless `trace` is All.
void WritePacketRows(std::ostream& os, std::uint32_t runId, const MetricsLedger& ledger, PacketTrace trace);

void WriteFlowsHeader(std::ostream& os);
void WriteFlowRows(std::ostream& os, const RunStatistics& stats);

void WriteSummaryHeader(std::ostream& os);
void WriteSummaryRow(std::ostream& os, const RunSummary& summary);

/// Baseline against cooperative, per sweep fraction, for the fronthaul
/// flow.  Runs of a mode that was not executed show "-".
std::string ComparisonTable(const std::vector<RunStatistics>& runs);

} // namespace ctisim

#endif
