#include "chemoflux/integrator.hpp"

#include "chemoflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemoflux {

void ModelParams::validate() const {
    // chi = 0 is admitted: the chemotaxis-free runs are the reference
    // cases of the regularization and mesh studies.
    if (!(chi >= 0.0) || !std::isfinite(chi))
        throw ConfigError("model.chi: nonnegative finite value required");
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw ConfigError("model.mu: nonnegative finite value required");
    limiter.validate();
    elliptic.validate();
}

void DtPolicy::validate() const {
    if (!(dt_min > 0.0) || !(dt_min < dt_max))
        throw ConfigError("dt policy: 0 < dt_min < dt_max required");
    if (!(safety > 0.0) || !(safety < 1.0))
        throw ConfigError("dt.safety: value in (0,1) required");
    if (!(blowup_threshold > 0.0))
        throw ConfigError("dt.blowup_threshold: positive value required");
}

SimState make_state(const ScalarField& u0, const ModelParams& params,
                    EllipticSolver& solver) {
    params.validate();
    require_finite(u0);
    SimState s;
    s.u = u0;
    s.v = solver.solve(u0, 1.0, 1.0, params.elliptic);
    return s;
}

SimState make_state(const ScalarField& u0, const Grid& g, const ModelParams& params) {
    EllipticSolver solver(g);
    require_same_grid(u0, g);
    return make_state(u0, params, solver);
}

namespace {

std::pair<double, double> field_min_max(const ScalarField& f) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

double max_abs_face(const FaceVectorField& f) {
    double m = 0.0;
    for (const auto& ax : f.axis)
        for (double v : ax) m = std::max(m, std::abs(v));
    return m;
}

int stencil_dimension(const Grid& g) {
    switch (g.kind()) {
        case GridKind::cartesian1d: return 1;
        case GridKind::cartesian2d: return 2;
        case GridKind::radial: return g.spec().dim_n;
    }
    return 1;
}

} // namespace

double stable_dt(const SimState& state, const ModelParams& params, const Grid& g,
                 const DtPolicy& pol) {
    params.validate();
    pol.validate();
    const FaceVectorField F = limited_flux(face_gradient_magnitude(state.v, g),
                                           face_gradient(state.v, g), params.limiter);
    const double max_f = max_abs_face(F);
    const int d = stencil_dimension(g);
    double dt = pol.dt_max;
    if (params.chi > 0.0 && max_f > 0.0)
        dt = std::min(dt, g.min_h() / (2.0 * d * params.chi * max_f));
    const double max_u = field_min_max(state.u).second;
    dt = std::min(dt, 1.0 / (params.mu * std::max(max_u - 1.0, 0.0) + 1e-30));
    dt *= pol.safety;
    return std::max(dt, pol.dt_min);
}

SimState step(const SimState& state, const ModelParams& params, double dt,
              EllipticSolver& solver) {
    if (!(dt > 0.0)) throw ConfigError("step: dt > 0 required");
    const Grid& g = solver.grid();
    require_same_grid(state.u, g);
    require_same_grid(state.v, g);

    const FaceVectorField F = limited_flux(face_gradient_magnitude(state.v, g),
                                           face_gradient(state.v, g), params.limiter);
    const ScalarField div = upwind_divergence(state.u, F, params.chi, g);

    ScalarField b = make_field(g);
    for (int c = 0; c < g.num_cells(); ++c) {
        const double u = state.u.values[c];
        b.values[c] = u + dt * (-div.values[c] + params.mu * (u * (1.0 - u)));
    }

    SimState next;
    next.u = solver.solve(b, 1.0, dt, params.elliptic, &state.u);
    next.v = solver.solve(next.u, 1.0, 1.0, params.elliptic, &state.v);
    next.t = state.t + dt;
    next.step_count = state.step_count + 1;
    next.last_dt = dt;
    next.grad_energy_cum = state.grad_energy_cum + dt * gradient_energy(next.u, g);
    return next;
}

SimState step(const SimState& state, const ModelParams& params, const Grid& g,
              double dt) {
    EllipticSolver solver(g);
    return step(state, params, dt, solver);
}

std::string to_string(RunVerdict v) {
    switch (v) {
        case RunVerdict::completed: return "completed";
        case RunVerdict::blowup_abort: return "blowup_abort";
        case RunVerdict::dt_underflow: return "dt_underflow";
        case RunVerdict::solver_failure: return "solver_failure";
    }
    return "?";
}

RunResult run(const ScalarField& u0, const ModelParams& params, const Grid& g,
              const DtPolicy& pol, double t_end, double monitor_every,
              const MonitorSink& sink, const std::vector<double>& qlist) {
    params.validate();
    pol.validate();
    require_finite(u0);
    if (!(t_end > 0.0)) throw ConfigError("run: t_end > 0 required");
    if (!(monitor_every > 0.0)) throw ConfigError("run: monitor_every > 0 required");

    EllipticSolver solver(g);
    RunResult out;
    out.final_state = make_state(u0, params, solver);
    SimState& state = out.final_state;

    auto logistic_field = [&](const ScalarField& u) {
        ScalarField w = make_field(g);
        for (int c = 0; c < g.num_cells(); ++c) {
            const double x = u.values[c];
            w.values[c] = x * (1.0 - x);
        }
        return w;
    };

    double m_prev = integrate(state.u, g);
    {
        const auto [lo, hi] = field_min_max(state.u);
        out.audit.sup_mass = m_prev;
        out.audit.peak_max_u = hi;
        out.audit.min_rel_u = lo / std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    }

    double last_emit_t = std::numeric_limits<double>::quiet_NaN();
    auto emit = [&]() {
        if (sink && state.t != last_emit_t) {
            sink(record(state, g, qlist));
            last_emit_t = state.t;
        }
    };

    emit();
    if (field_min_max(state.u).second >= pol.blowup_threshold) {
        out.verdict = RunVerdict::blowup_abort;
        return out;
    }

    long checkpoint = 1;
    while (state.t < t_end) {
        const double dt_formula = stable_dt(state, params, g, pol);
        if (dt_formula <= pol.dt_min) {
            out.verdict = RunVerdict::dt_underflow;
            break;
        }
        const double t_target = std::min(checkpoint * monitor_every, t_end);
        double dt = dt_formula;
        bool at_checkpoint = false;
        if (state.t + dt >= t_target) {
            dt = t_target - state.t;
            at_checkpoint = true;
        }

        const double logistic_sum =
            params.mu != 0.0 ? integrate(logistic_field(state.u), g) : 0.0;

        SimState next;
        try {
            next = step(state, params, dt, solver);
        } catch (const Error&) {
            out.verdict = RunVerdict::solver_failure;
            break;
        }
        if (at_checkpoint) next.t = t_target;  // land on checkpoints exactly

        const double m_new = integrate(next.u, g);
        const double ode_gap =
            std::abs(m_new - m_prev - dt * params.mu * logistic_sum) /
            std::max(1.0, m_prev);
        out.audit.worst_mass_ode = std::max(out.audit.worst_mass_ode, ode_gap);
        if (m_prev > g.total_volume())
            out.audit.worst_mass_growth =
                std::max(out.audit.worst_mass_growth, m_new / m_prev - 1.0);
        const auto [lo, hi] = field_min_max(next.u);
        out.audit.min_rel_u =
            std::min(out.audit.min_rel_u,
                     lo / std::max(1.0, std::max(std::abs(lo), std::abs(hi))));
        out.audit.sup_mass = std::max(out.audit.sup_mass, m_new);
        out.audit.peak_max_u = std::max(out.audit.peak_max_u, hi);
        ++out.audit.steps;

        state = std::move(next);
        m_prev = m_new;

        if (at_checkpoint) {
            emit();
            if (t_target < t_end) ++checkpoint;
        }
        if (hi >= pol.blowup_threshold) {
            out.verdict = RunVerdict::blowup_abort;
            break;
        }
    }

    emit();  // abort-time record; no-op when the final checkpoint was emitted
    return out;
}

} // namespace chemoflux
