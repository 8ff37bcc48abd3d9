#include "chemoflux/errors.hpp"
#include "chemoflux/integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chemoflux;

namespace {

GridSpec line(int cells, double extent = 1.0) {
    GridSpec s;
    s.kind = GridKind::cartesian1d;
    s.cells = {cells, 1};
    s.extent = {extent, 1.0};
    s.dim_n = 1;
    return s;
}

GridSpec square(int cells) {
    GridSpec s;
    s.kind = GridKind::cartesian2d;
    s.cells = {cells, cells};
    s.dim_n = 2;
    return s;
}

ModelParams params(double chi, double mu, double p,
                   double n_reg = std::numeric_limits<double>::infinity()) {
    ModelParams m;
    m.chi = chi;
    m.mu = mu;
    m.limiter.p = p;
    m.limiter.n_reg = n_reg;
    return m;
}

SimState raw_state(const Grid& g, const ScalarField& u, const ScalarField& v) {
    SimState s;
    s.u = u;
    s.v = v;
    return s;
}

} // namespace

TEST_CASE("stable_dt: unconstrained state yields safety * dt_max") {
    const Grid g = make_grid(line(10));
    const ScalarField u = make_field(g, 0.5);
    const SimState s = raw_state(g, u, make_field(g, 0.5));  // constant v, F = 0
    const double dt = stable_dt(s, params(1.0, 1.0, 1.4), g, DtPolicy{});
    CHECK(dt == doctest::Approx(0.009).epsilon(1e-14));
}

TEST_CASE("stable_dt: advective cap h/(2 d chi maxF)") {
    const Grid g = make_grid(line(10));
    // v = 25 x gives |grad v| = 25 at interior faces; p = 1.5 puts max|F| at 5.
    ScalarField v = make_field(g);
    for (int i = 0; i < g.nx(); ++i) v[i] = 25.0 * g.cell_center(0, i);
    const SimState s = raw_state(g, make_field(g, 0.5), v);
    const double dt = stable_dt(s, params(1.0, 0.0, 1.5), g, DtPolicy{});
    // 0.9 * min(0.01, 0.1/(2*1*1*5)) = 0.9 * 0.01
    CHECK(dt == doctest::Approx(0.009).epsilon(1e-12));

    ModelParams strong = params(4.0, 0.0, 1.5);
    const double dt2 = stable_dt(s, strong, g, DtPolicy{});
    CHECK(dt2 == doctest::Approx(0.9 * 0.1 / (2.0 * 1.0 * 4.0 * 5.0)).epsilon(1e-12));
}

TEST_CASE("stable_dt: logistic cap 1/(mu (max u - 1))") {
    const Grid g = make_grid(line(10));
    const ScalarField u = make_field(g, 3.0);
    const SimState s = raw_state(g, u, make_field(g, 3.0));
    // cap = 1/(2*2) = 0.25 does not bind below dt_max
    CHECK(stable_dt(s, params(1.0, 2.0, 1.4), g, DtPolicy{}) ==
          doctest::Approx(0.009).epsilon(1e-14));
    // mu = 200: cap = 1/400 binds
    CHECK(stable_dt(s, params(1.0, 200.0, 1.4), g, DtPolicy{}) ==
          doctest::Approx(0.9 / 400.0).epsilon(1e-12));
}

TEST_CASE("stable_dt never returns less than dt_min") {
    const Grid g = make_grid(line(10));
    const SimState s = raw_state(g, make_field(g, 0.5), make_field(g, 0.5));
    DtPolicy pol;
    pol.dt_min = 0.0095;
    CHECK(stable_dt(s, params(1.0, 0.0, 1.4), g, pol) == 0.0095);
}

TEST_CASE("homogeneous steady states are fixed points of step") {
    const Grid g = make_grid(square(16));
    EllipticSolver solver(g);
    const ModelParams m = params(7.0, 1.0, 1.4);

    SimState s1 = make_state(make_field(g, 1.0), m, solver);
    const SimState s1n = step(s1, m, 0.005, solver);
    for (int c = 0; c < g.num_cells(); ++c)
        CHECK(std::abs(s1n.u[c] - 1.0) <= 1e-12);

    SimState s0 = make_state(make_field(g, 0.0), m, solver);
    const SimState s0n = step(s0, m, 0.005, solver);
    for (int c = 0; c < g.num_cells(); ++c) CHECK(s0n.u[c] == 0.0);
}

TEST_CASE("one step preserves positivity and the discrete mass identity") {
    const Grid g = make_grid(square(32));
    EllipticSolver solver(g);
    const ModelParams m = params(5.0, 1.0, 1.4);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 2.0);

    for (int trial = 0; trial < 5; ++trial) {
        ScalarField u0 = make_field(g);
        for (auto& v : u0.values) v = dist(rng);
        SimState s = make_state(u0, m, solver);
        const double dt = stable_dt(s, m, g, DtPolicy{});
        const SimState next = step(s, m, dt, solver);

        double mn = next.u[0];
        for (int c = 0; c < g.num_cells(); ++c) mn = std::min(mn, next.u[c]);
        CHECK(mn >= -1e-12 * std::max(1.0, linf_norm(next.u)));

        ScalarField w = make_field(g);
        for (int c = 0; c < g.num_cells(); ++c)
            w[c] = s.u[c] * (1.0 - s.u[c]);
        const double m0 = integrate(s.u, g), m1 = integrate(next.u, g);
        const double expected = m0 + dt * m.mu * integrate(w, g);
        CHECK(std::abs(m1 - expected) <= 1e-12 * std::max(1.0, m0));
    }
}

TEST_CASE("chemotaxis alone conserves mass exactly") {
    const Grid g = make_grid(square(24));
    EllipticSolver solver(g);
    const ModelParams m = params(8.0, 0.0, 1.3);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    ScalarField u0 = make_field(g);
    for (auto& v : u0.values) v = dist(rng);
    SimState s = make_state(u0, m, solver);
    const double m0 = integrate(s.u, g);
    for (int k = 0; k < 20; ++k) {
        const double dt = stable_dt(s, m, g, DtPolicy{});
        s = step(s, m, dt, solver);
    }
    CHECK(std::abs(integrate(s.u, g) - m0) <= 1e-12 * m0);
}

TEST_CASE("run holds the homogeneous state and reports checkpoint times exactly") {
    const Grid g = make_grid(square(12));
    std::vector<MonitorRecord> series;
    const RunResult r = run(make_field(g, 1.0), params(3.0, 1.0, 1.4), g, DtPolicy{},
                            1.0, 0.25,
                            [&](const MonitorRecord& rec) { series.push_back(rec); });
    CHECK(r.verdict == RunVerdict::completed);
    CHECK(linf_norm([&] {
              ScalarField d = r.final_state.u;
              for (auto& v : d.values) v -= 1.0;
              return d;
          }()) <= 1e-10);
    REQUIRE(series.size() == 5);
    CHECK(series[0].t == 0.0);
    CHECK(series[1].t == 0.25);
    CHECK(series[2].t == 0.5);
    CHECK(series[3].t == 0.75);
    CHECK(series[4].t == 1.0);
    for (const auto& rec : series)
        CHECK(rec.elliptic_residual <= ModelParams{}.elliptic.rel_tol);
}

TEST_CASE("perturbed state relaxes to carrying capacity under weak chemotaxis") {
    const Grid g = make_grid(line(64));
    ScalarField u0 = make_field(g);
    for (int i = 0; i < g.nx(); ++i)
        u0[i] = 1.0 + 0.1 * std::cos(std::numbers::pi * g.cell_center(0, i));
    const RunResult r =
        run(u0, params(0.1, 1.0, 1.4), g, DtPolicy{}, 20.0, 1.0, nullptr);
    CHECK(r.verdict == RunVerdict::completed);
    ScalarField d = r.final_state.u;
    for (auto& v : d.values) v -= 1.0;
    CHECK(linf_norm(d) <= 1e-3);
}

TEST_CASE("run audit tracks the per-step lemma margins") {
    const Grid g = make_grid(square(24));
    ScalarField u0 = make_field(g);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (auto& v : u0.values) v = dist(rng);
    const RunResult r =
        run(u0, params(5.0, 1.0, 1.4), g, DtPolicy{}, 2.0, 0.2, nullptr);
    CHECK(r.verdict == RunVerdict::completed);
    CHECK(r.audit.worst_mass_ode <= 1e-11);
    CHECK(r.audit.min_rel_u >= -1e-12);
    CHECK(r.audit.worst_mass_growth <= 1e-12);
    CHECK(r.audit.sup_mass <=
          std::max(integrate(u0, g), g.total_volume()) * (1.0 + 1e-10));
    CHECK(r.audit.steps > 0);
}

TEST_CASE("dt underflow aborts the run with a verdict") {
    const Grid g = make_grid(line(10));
    DtPolicy pol;
    pol.dt_min = 0.0095;  // above safety * dt_max
    const RunResult r =
        run(make_field(g, 0.5), params(1.0, 0.0, 1.4), g, pol, 1.0, 0.5, nullptr);
    CHECK(r.verdict == RunVerdict::dt_underflow);
    CHECK(r.audit.steps == 0);
}

TEST_CASE("blow-up threshold aborts with a verdict, not an error") {
    const Grid g = make_grid(line(10));
    DtPolicy pol;
    pol.blowup_threshold = 1.5;
    std::vector<MonitorRecord> series;
    const RunResult r =
        run(make_field(g, 2.0), params(1.0, 0.0, 1.4), g, pol, 1.0, 0.5,
            [&](const MonitorRecord& rec) { series.push_back(rec); });
    CHECK(r.verdict == RunVerdict::blowup_abort);
    CHECK(series.size() == 1);  // the abort-time record
}

TEST_CASE("non-finite arithmetic surfaces as solver_failure") {
    const Grid g = make_grid(line(10));
    DtPolicy pol;
    pol.blowup_threshold = 1e301;
    const RunResult r =
        run(make_field(g, 1e200), params(1.0, 1.0, 1.4), g, pol, 1.0, 0.5, nullptr);
    CHECK(r.verdict == RunVerdict::solver_failure);
}

TEST_CASE("trajectories are bit-identical across reruns") {
    const Grid g = make_grid(square(16));
    ScalarField u0 = make_field(g);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (auto& v : u0.values) v = dist(rng);
    const ModelParams m = params(6.0, 1.0, 1.4, 16.0);

    std::vector<MonitorRecord> s1, s2;
    const RunResult r1 = run(u0, m, g, DtPolicy{}, 0.5, 0.1,
                             [&](const MonitorRecord& rec) { s1.push_back(rec); });
    const RunResult r2 = run(u0, m, g, DtPolicy{}, 0.5, 0.1,
                             [&](const MonitorRecord& rec) { s2.push_back(rec); });
    CHECK(r1.final_state.u.values == r2.final_state.u.values);
    CHECK(r1.final_state.v.values == r2.final_state.v.values);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].mass == s2[i].mass);
        CHECK(s1[i].max_u == s2[i].max_u);
        CHECK(s1[i].grad_energy_cum == s2[i].grad_energy_cum);
    }
}

TEST_CASE("parameter validation rejects bad inputs") {
    CHECK_THROWS_AS(params(-1.0, 1.0, 1.4).validate(), ConfigError);
    CHECK_THROWS_AS(params(1.0, -1.0, 1.4).validate(), ConfigError);
    DtPolicy pol;
    pol.safety = 1.5;
    CHECK_THROWS_AS(pol.validate(), ConfigError);
    pol = DtPolicy{};
    pol.dt_min = 1.0;
    CHECK_THROWS_AS(pol.validate(), ConfigError);
    const Grid g = make_grid(line(10));
    ScalarField bad = make_field(g, 1.0);
    bad[0] = std::nan("");
    CHECK_THROWS_AS(make_state(bad, g, params(1.0, 1.0, 1.4)), NonFiniteError);
}
