#pragma once

#include <string>
#include <vector>

#include "emx/diagnostics.hpp"

namespace emx {

/// Serialize the series with full round-trip precision; identical records
/// produce byte-identical text.
std::string series_to_csv(const std::vector<SeriesPoint>& series);
std::vector<SeriesPoint> series_from_csv(const std::string& csv);

/// Write a self-describing run directory:
///   config.json    config snapshot
///   meta.json      model, grid, params, partition profile, wall clock
///   series.csv     pinned column order, header row
///   snapshots/     per-field little-endian float64 dumps + JSON headers
///   checks.json    diagnostic reports (may be written later by append)
///   done           completion marker
void write_run_dir(const std::string& dir, const RunRecord& record,
                   const std::vector<CheckReport>& checks);

void write_checks(const std::string& dir, const std::vector<CheckReport>& checks);

/// Load a run directory back for offline diagnostics.
RunRecord load_run_record(const std::string& dir);

}  // namespace emx
