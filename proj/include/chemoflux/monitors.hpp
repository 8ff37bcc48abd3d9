#pragma once

#include "chemoflux/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chemoflux {

struct SimState;

/// Per-checkpoint diagnostics of a trajectory.
struct MonitorRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
    std::vector<std::pair<double, double>> lq;  // (q, L^{2q} norm of u)
    double grad_v_max = 0.0;
    double grad_energy_cum = 0.0;
    double elliptic_residual = 0.0;
};

/// Deterministic diagnostics for one state; pure function of the state.
MonitorRecord record(const SimState& state, const Grid& g, const std::vector<double>& qlist);

/// One evaluated invariant. margin is the violation amount in the
/// invariant's own units: <= 0 passes, > 0 fails.
struct InvariantEntry {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    double t_worst = 0.0;
};

struct InvariantReport {
    std::vector<InvariantEntry> entries;
    bool all_pass() const;
};

/// sup_t mass <= max(m0, |Omega|) * (1 + 1e-10).
InvariantEntry check_mass_bound(const std::vector<MonitorRecord>& series, double m0,
                                double vol);

/// min over the series of min_u >= -1e-12 * max(1, max_u).
InvariantEntry check_nonnegativity(const std::vector<MonitorRecord>& series);

enum class Boundedness { bounded, growing, inconclusive };
std::string to_string(Boundedness b);

/// Compares sup max_u over the early window t < split*T against the late
/// window: bounded if the late sup is within 5%, growing if it at least
/// doubles, inconclusive otherwise. Requires >= 10 checkpoints.
Boundedness boundedness_verdict(const std::vector<MonitorRecord>& series,
                                double window_split);

} // namespace chemoflux
