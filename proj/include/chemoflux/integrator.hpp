#pragma once

#include "chemoflux/elliptic.hpp"
#include "chemoflux/flux.hpp"
#include "chemoflux/monitors.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chemoflux {

struct ModelParams {
    double chi = 10.0;  // chemotactic sensitivity
    double mu = 1.0;    // logistic rate; 0 disables growth
    LimiterParams limiter;
    EllipticOptions elliptic;
    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

struct DtPolicy {
    double dt_max = 1e-2;
    double safety = 0.9;
    double dt_min = 1e-12;
    double blowup_threshold = 1e6;
    void validate() const;
    bool operator==(const DtPolicy&) const = default;
};

/// Trajectory state. v is always the Helmholtz solve of the current u;
/// grad_energy_cum carries the running sum dt * ||grad u||_2^2 so the
/// budget is observable per checkpoint.
struct SimState {
    double t = 0.0;
    ScalarField u;
    ScalarField v;
    long step_count = 0;
    double last_dt = 0.0;
    double grad_energy_cum = 0.0;
};

SimState make_state(const ScalarField& u0, const Grid& g, const ModelParams& params);
SimState make_state(const ScalarField& u0, const ModelParams& params, EllipticSolver& solver);

/// dt = safety * min(dt_max, h/(2 d chi max|F|), 1/(mu (max u - 1)_+ + eps)),
/// never below dt_min. d is the spatial dimension the cell volumes scale
/// with: the axis count for Cartesian grids and the ambient dimension for
/// radial grids (the inner cell's volume-to-face ratio is h/N there,
/// which is what the donor-cell positivity bound sees).
double stable_dt(const SimState& state, const ModelParams& params, const Grid& g,
                 const DtPolicy& pol);

/// One IMEX step: explicit upwind chemotaxis and logistic source into
///   b = u + dt (-D + mu u (1 - u)),
/// implicit diffusion (I - dt Lap_h) u' = b, then v' = solve_v(u').
/// Inputs are not modified.
SimState step(const SimState& state, const ModelParams& params, const Grid& g, double dt);
SimState step(const SimState& state, const ModelParams& params, double dt,
              EllipticSolver& solver);

enum class RunVerdict { completed, blowup_abort, dt_underflow, solver_failure };
std::string to_string(RunVerdict v);

/// Worst per-step margins accumulated over a run; the discrete shadows of
/// the mass-ODE identity, the mass bound and nonnegativity, checked at
/// every step rather than only at checkpoints.
struct RunAudit {
    double worst_mass_ode = 0.0;      // max |dm - dt mu sum u(1-u) vol| / max(1, m)
    double min_rel_u = 0.0;           // min of min(u) / max(1, ||u||_inf), all states
    double worst_mass_growth = 0.0;   // max of m'/m - 1 over steps with m > |Omega|
    double sup_mass = 0.0;
    double peak_max_u = 0.0;
    long steps = 0;
};

struct RunResult {
    SimState final_state;
    RunVerdict verdict = RunVerdict::completed;
    RunAudit audit;
};

using MonitorSink = std::function<void(const MonitorRecord&)>;

/// Advances u0 to t_end under the dt policy, emitting a MonitorRecord at
/// t = 0, at every multiple of monitor_every (steps are clipped to land
/// on checkpoints exactly) and at the final time. Aborts are reported
/// through the verdict, never as exceptions.
RunResult run(const ScalarField& u0, const ModelParams& params, const Grid& g,
              const DtPolicy& pol, double t_end, double monitor_every,
              const MonitorSink& sink,
              const std::vector<double>& qlist = {1.0, 2.0, 4.0});

} // namespace chemoflux
