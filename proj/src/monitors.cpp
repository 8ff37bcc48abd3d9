#include "chemoflux/monitors.hpp"

#include "chemoflux/elliptic.hpp"
#include "chemoflux/errors.hpp"
#include "chemoflux/flux.hpp"
#include "chemoflux/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace chemoflux {

MonitorRecord record(const SimState& state, const Grid& g,
                     const std::vector<double>& qlist) {
    require_same_grid(state.u, g);
    require_same_grid(state.v, g);
    MonitorRecord r;
    r.t = state.t;
    r.dt = state.last_dt;
    r.mass = integrate(state.u, g);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : state.u.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    r.min_u = lo;
    r.max_u = hi;
    for (double q : qlist) {
        if (!(q >= 1.0)) throw ConfigError("monitor q-list entries must be >= 1");
        r.lq.emplace_back(q, lq_norm(state.u, g, 2.0 * q));
    }
    const FaceScalarField gmag = face_gradient_magnitude(state.v, g);
    double gm = 0.0;
    for (const auto& ax : gmag.axis)
        for (double v : ax) gm = std::max(gm, v);
    r.grad_v_max = gm;
    r.grad_energy_cum = state.grad_energy_cum;

    // Residual of the chemical equation for the stored pair (u, v).
    ScalarField res = apply_operator(state.v, g, 1.0, 1.0);
    for (int c = 0; c < g.num_cells(); ++c)
        res.values[c] -= state.u.values[c];
    const double un = std::sqrt(dot_volume(state.u, state.u, g));
    const double rn = std::sqrt(dot_volume(res, res, g));
    r.elliptic_residual = un > 0.0 ? rn / un : rn;

    for (double v : {r.t, r.dt, r.mass, r.min_u, r.max_u, r.grad_v_max,
                     r.grad_energy_cum, r.elliptic_residual})
        if (!std::isfinite(v)) throw NonFiniteError("non-finite monitor record entry");
    for (const auto& [q, n] : r.lq)
        if (!std::isfinite(n)) throw NonFiniteError("non-finite monitor record entry");
    return r;
}

bool InvariantReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const InvariantEntry& e) { return e.pass; });
}

InvariantEntry check_mass_bound(const std::vector<MonitorRecord>& series, double m0,
                                double vol) {
    if (series.empty()) throw ConfigError("check_mass_bound: empty series");
    const double bound = std::max(m0, vol) * (1.0 + 1e-10);
    double sup = -std::numeric_limits<double>::infinity(), t_sup = series.front().t;
    for (const auto& r : series) {
        if (r.mass > sup) {
            sup = r.mass;
            t_sup = r.t;
        }
    }
    InvariantEntry e;
    e.name = "mass_bound";
    e.margin = sup - bound;
    e.pass = sup <= bound;
    e.t_worst = t_sup;
    return e;
}

InvariantEntry check_nonnegativity(const std::vector<MonitorRecord>& series) {
    if (series.empty()) throw ConfigError("check_nonnegativity: empty series");
    InvariantEntry e;
    e.name = "nonnegativity";
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : series) {
        const double headroom = r.min_u + 1e-12 * std::max(1.0, r.max_u);
        if (headroom < worst) {
            worst = headroom;
            e.t_worst = r.t;
        }
    }
    e.margin = -worst;
    e.pass = worst >= 0.0;
    return e;
}

std::string to_string(Boundedness b) {
    switch (b) {
        case Boundedness::bounded: return "bounded";
        case Boundedness::growing: return "growing";
        case Boundedness::inconclusive: return "inconclusive";
    }
    return "?";
}

Boundedness boundedness_verdict(const std::vector<MonitorRecord>& series,
                                double window_split) {
    if (series.size() < 10)
        throw ConfigError("boundedness_verdict: at least 10 checkpoints required");
    if (!(window_split > 0.0) || !(window_split < 1.0))
        throw ConfigError("boundedness_verdict: window_split in (0,1) required");
    const double t_split = window_split * series.back().t;
    double m1 = 0.0, m2 = 0.0;
    for (const auto& r : series) {
        double& m = r.t < t_split ? m1 : m2;
        m = std::max(m, r.max_u);
    }
    if (m2 <= 1.05 * m1) return Boundedness::bounded;
    if (m2 >= 2.0 * m1) return Boundedness::growing;
    return Boundedness::inconclusive;
}

} // namespace chemoflux
