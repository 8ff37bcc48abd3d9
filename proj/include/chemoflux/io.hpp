#pragma once

#include "chemoflux/experiments.hpp"
#include "chemoflux/grid.hpp"
#include "chemoflux/monitors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chemoflux {

/// Monitor series as CSV: header
///   t,dt,mass,min_u,max_u,l2q_<q>...,grad_v_max,grad_energy_cum,elliptic_residual
/// one row per record, every value as a full 17-significant-digit decimal.
/// Byte-stable for identical series.
void write_monitor_csv(const std::vector<MonitorRecord>& series, const std::string& path);
std::vector<MonitorRecord> read_monitor_csv(const std::string& path);

/// Field snapshot: one text header line
///   CHEMOFLUX v1 <kind> <cells...> <extents...> <N>
/// followed by row-major little-endian float64 cell values.
/// read(write(f)) reproduces the payload bit-exactly.
void write_snapshot(const ScalarField& f, const Grid& g, const std::string& path);
std::pair<ScalarField, GridSpec> read_snapshot(const std::string& path);

/// Study table as CSV with '#' comment lines carrying kind, verdict and
/// the reproducibility stamp.
void write_study_csv(const StudyResult& result, const std::string& path);

} // namespace chemoflux
