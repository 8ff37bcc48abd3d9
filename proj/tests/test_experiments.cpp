#include "chemoflux/errors.hpp"
#include "chemoflux/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace chemoflux;

namespace {

GridSpec line(int cells) {
    GridSpec s;
    s.kind = GridKind::cartesian1d;
    s.cells = {cells, 1};
    s.extent = {1.0, 1.0};
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

GridSpec ball(int cells, int dim_n) {
    GridSpec s;
    s.kind = GridKind::radial;
    s.cells = {cells, 1};
    s.extent = {1.0, 1.0};
    s.dim_n = dim_n;
    return s;
}

InitialData constant(double c) {
    InitialData d;
    d.kind = InitKind::constant;
    d.base = c;
    return d;
}

InitialData perturbed(double c, double a, int kx = 1, int ky = 1) {
    InitialData d;
    d.kind = InitKind::perturbed_constant;
    d.base = c;
    d.amplitude = a;
    d.modes = {kx, ky};
    return d;
}

InitialData gaussian(double a, double sigma) {
    InitialData d;
    d.kind = InitKind::gaussian_bump;
    d.amplitude = a;
    d.sigma = sigma;
    return d;
}

CaseConfig base_case(const GridSpec& g, const InitialData& init, double chi, double mu,
                     double p) {
    CaseConfig c;
    c.grid = g;
    c.init = init;
    c.model.chi = chi;
    c.model.mu = mu;
    c.model.limiter.p = p;
    return c;
}

double cell_value(const ScalarField& f, const Grid& g, int i, int j = 0) {
    return f.values[g.cell_index(i, j)];
}

} // namespace

TEST_CASE("constant initial data") {
    const Grid g = make_grid(square(8));
    const ScalarField u = make_initial(constant(1.0), g);
    for (double v : u.values) CHECK(v == 1.0);
    CHECK_THROWS_AS(make_initial(constant(-0.5), g), ConfigError);
}

TEST_CASE("perturbed constant stays within [c-A, c+A] and is wall-symmetric") {
    const Grid g = make_grid(line(32));
    const ScalarField u = make_initial(perturbed(1.0, 0.1), g);
    for (double v : u.values) {
        CHECK(v >= 0.9 - 1e-15);
        CHECK(v <= 1.1 + 1e-15);
    }
    // cos(pi x) mirrored cell centers: u(0) + u(L) = 2c exactly
    CHECK(cell_value(u, g, 0) + cell_value(u, g, g.nx() - 1) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(make_initial(perturbed(1.0, 1.5), g), ConfigError);
}

TEST_CASE("gaussian bump mass matches the analytic integral") {
    const Grid g = make_grid(square(128));
    const ScalarField u = make_initial(gaussian(4.0, 0.05), g);
    const double mass = integrate(u, g);
    const double analytic = 4.0 * 2.0 * std::numbers::pi * 0.05 * 0.05;
    CHECK(std::abs(mass - analytic) / analytic <= 0.01);
    for (double v : u.values) CHECK(v >= 0.0);
}

TEST_CASE("gaussian too wide for the zero-flux boundary is rejected") {
    const Grid g = make_grid(square(32));
    CHECK_THROWS_AS(make_initial(gaussian(4.0, 0.5), g), ConfigError);
    // sigma = 0.06 keeps the boundary-normal derivative below 1e-12
    CHECK_NOTHROW(make_initial(gaussian(4.0, 0.06), g));
}

TEST_CASE("radial initial data is centered at the origin") {
    const Grid g = make_grid(ball(64, 3));
    const ScalarField u = make_initial(gaussian(4.0, 0.05), g);
    CHECK(cell_value(u, g, 0) > cell_value(u, g, 10));
    InitialData off = gaussian(4.0, 0.05);
    off.center = {0.3, std::nan("")};
    CHECK_THROWS_AS(make_initial(off, g), ConfigError);
}

TEST_CASE("regularization study with chi = 0 is exactly inert in n") {
    CaseConfig base = base_case(square(16), perturbed(1.0, 0.2), 0.0, 1.0, 1.4);
    const StudyResult s = regularization_study(base, {1.0, 4.0}, 0.3);
    CHECK(s.verdict == "pass");
    REQUIRE(s.rows.size() == 3);  // n = 1, 4 and the inf reference
    for (const auto& row : s.rows) {
        CHECK(row[1] == "completed");
        CHECK(std::abs(std::stod(row[2])) <= 1e-12);
        CHECK(std::abs(std::stod(row[3])) <= 1e-12);
    }
}

TEST_CASE("regularization study in the small-gradient regime is already converged") {
    CaseConfig base = base_case(line(32), perturbed(1.0, 1e-6), 1.0, 1.0, 1.9);
    const StudyResult s = regularization_study(base, {1.0, 4.0}, 0.5);
    CHECK(s.verdict == "pass");
    for (std::size_t i = 0; i + 1 < s.rows.size(); ++i)
        CHECK(std::stod(s.rows[i][2]) <= 1e-8);
}

TEST_CASE("regularization error decays with n on an aggregating benchmark") {
    CaseConfig base = base_case(square(32), gaussian(4.0, 0.06), 10.0, 1.0, 1.4);
    const StudyResult s = regularization_study(base, {1.0, 4.0, 16.0}, 0.2);
    REQUIRE(s.rows.size() == 4);
    const double e1 = std::stod(s.rows[0][2]);
    const double e4 = std::stod(s.rows[1][2]);
    const double e16 = std::stod(s.rows[2][2]);
    CHECK(e1 > 0.0);
    CHECK(e4 <= e1);
    CHECK(e16 <= e4);
    CHECK(s.verdict == "pass");
    CHECK(s.config_stamp.find("p=1.4") != std::string::npos);
}

TEST_CASE("regularization study surfaces aborted rows") {
    CaseConfig base = base_case(square(16), perturbed(1.0, 0.2), 1.0, 1.0, 1.4);
    base.dt.blowup_threshold = 0.5;  // trips immediately
    const StudyResult s = regularization_study(base, {1.0}, 0.2);
    CHECK(s.verdict == "fail:blowup_abort");
}

TEST_CASE("exponent sweep classifies tame regimes as bounded") {
    CaseConfig base = base_case(square(16), perturbed(1.0, 0.2), 10.0, 1.0, 1.4);
    const StudyResult s =
        exponent_sweep(base, {1.2, 1.4}, {square(16), ball(32, 3)}, 2.0);
    CHECK(s.verdict == "info");
    REQUIRE(s.rows.size() == 4);
    for (const auto& row : s.rows) {
        CHECK(row[2] == "completed");
        CHECK(row[3] == "bounded");
    }
    const StudyResult again =
        exponent_sweep(base, {1.2, 1.4}, {square(16), ball(32, 3)}, 2.0);
    CHECK(s.rows == again.rows);  // studies are pure functions of their config
    CHECK_THROWS_AS(exponent_sweep(base, {2.5}, {square(16)}, 1.0), ConfigError);
}

TEST_CASE("mesh study, elliptic mode: manufactured order two") {
    CaseConfig base = base_case(line(32), constant(1.0), 10.0, 1.0, 1.4);
    const StudyResult s =
        mesh_convergence(base, {32, 64, 128}, 0.1, MeshMode::elliptic_manufactured, true);
    CHECK(s.verdict == "pass");
    REQUIRE(s.rows.size() == 3);
    const double order = std::stod(s.rows.back()[3]);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("mesh study, elliptic mode on the radial grid") {
    CaseConfig base = base_case(ball(32, 3), constant(1.0), 10.0, 1.0, 1.4);
    const StudyResult s =
        mesh_convergence(base, {32, 64, 128}, 0.1, MeshMode::elliptic_manufactured, true);
    CHECK(s.verdict == "pass");
}

TEST_CASE("mesh study, pure diffusion with dt ~ h^2 self-converges at order two") {
    CaseConfig base = base_case(line(32), perturbed(1.0, 0.5), 0.0, 0.0, 1.4);
    base.dt.dt_max = 2e-3;
    const StudyResult s =
        mesh_convergence(base, {32, 64, 128}, 0.1, MeshMode::full_scheme, true);
    REQUIRE(s.rows.size() == 3);
    const double order = std::stod(s.rows[1][4]);
    CHECK(order == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("mesh study validates its refinement ladder") {
    CaseConfig base = base_case(line(32), constant(1.0), 1.0, 0.0, 1.4);
    CHECK_THROWS_AS(
        mesh_convergence(base, {32, 64}, 0.1, MeshMode::elliptic_manufactured, true),
        ConfigError);
    CHECK_THROWS_AS(
        mesh_convergence(base, {32, 65, 128}, 0.1, MeshMode::elliptic_manufactured, true),
        ConfigError);
}
