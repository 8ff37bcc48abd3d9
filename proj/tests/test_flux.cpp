#include "chemoflux/errors.hpp"
#include "chemoflux/flux.hpp"

#include <doctest.h>

#include <cmath>
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

ScalarField linear_field(const Grid& g, double ax, double ay = 0.0) {
    ScalarField v = make_field(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            v[g.cell_index(i, j)] =
                ax * g.cell_center(0, i) +
                (g.naxes() == 2 ? ay * g.cell_center(1, j) : 0.0);
    return v;
}

// Scalar limiter magnitude via the same composite the module uses; the
// oracle for the frozen values below is the direct formula.
double limiter_magnitude(double gnorm, double p, double n_reg) {
    const double s = std::pow(gnorm, p - 1.0);
    return s / (1.0 + s / n_reg);
}

} // namespace

TEST_CASE("face gradient of constants and linears") {
    const Grid g = make_grid(line(10));
    const FaceVectorField zero = face_gradient(make_field(g, 4.2), g);
    for (double v : zero.axis[0]) CHECK(v == 0.0);

    const FaceVectorField grad = face_gradient(linear_field(g, 1.0), g);
    CHECK(grad.axis[0][0] == 0.0);
    CHECK(grad.axis[0][g.nx()] == 0.0);
    for (int f = 1; f < g.nx(); ++f)
        CHECK(grad.axis[0][f] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gradient magnitude reconstructs the full norm of linear fields") {
    const Grid g = make_grid(square(16));

    const FaceScalarField m3 = face_gradient_magnitude(linear_field(g, 3.0), g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i)
            CHECK(m3.axis[0][g.xface_index(i, j)] == doctest::Approx(3.0).epsilon(1e-12));
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            CHECK(m3.axis[1][g.yface_index(i, j)] == doctest::Approx(3.0).epsilon(1e-12));

    const double alpha = 2.0, beta = 1.5;
    const FaceScalarField mr = face_gradient_magnitude(linear_field(g, alpha, beta), g);
    const double expect = std::hypot(alpha, beta);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i)
            CHECK(mr.axis[0][g.xface_index(i, j)] ==
                  doctest::Approx(expect).epsilon(1e-12));
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            CHECK(mr.axis[1][g.yface_index(i, j)] ==
                  doctest::Approx(expect).epsilon(1e-12));

    const FaceScalarField mc = face_gradient_magnitude(make_field(g, 1.0), g);
    for (const auto& ax : mc.axis)
        for (double v : ax) CHECK(v == 0.0);
}

TEST_CASE("limited flux frozen value and limits") {
    const Grid g = make_grid(line(8));
    LimiterParams lp;
    lp.p = 1.5;
    lp.n_reg = 1.0;

    FaceScalarField gn = make_face_field(g);
    FaceVectorField gd = make_face_field(g);
    gn.axis[0][4] = 2.0;
    gd.axis[0][4] = 2.0;
    const FaceVectorField f = limited_flux(gn, gd, lp);
    // sqrt(2)/(1+sqrt(2)), evaluated to full precision
    CHECK(f.axis[0][4] == doctest::Approx(0.58578643762690495).epsilon(1e-15));
    CHECK(f.axis[0][0] == 0.0);

    lp.n_reg = std::numeric_limits<double>::infinity();
    gn.axis[0][4] = 1.0;
    gd.axis[0][4] = -1.0;
    const FaceVectorField unit = limited_flux(gn, gd, lp);
    CHECK(unit.axis[0][4] == doctest::Approx(-1.0).epsilon(1e-15));

    gn.axis[0][4] = 0.0;
    gd.axis[0][4] = 0.0;
    const FaceVectorField zero = limited_flux(gn, gd, lp);
    CHECK(zero.axis[0][4] == 0.0);
}

TEST_CASE("flux magnitude is bounded by min(g^{p-1}, n_reg) everywhere") {
    const Grid g = make_grid(line(5));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logu(-14.0, 6.0);
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> p_values = {1.1, 1.4, 1.9};
    const std::vector<double> n_values = {1.0, 10.0, 1e3, inf};
    const std::vector<double> specials = {0.0, 1e-300, 1e-14, 1e6};

    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        double gnorm;
        if (trial < static_cast<int>(specials.size()) * 12) {
            gnorm = specials[trial % specials.size()];
        } else {
            gnorm = std::pow(10.0, logu(rng));
        }
        LimiterParams lp;
        lp.p = p_values[trial % p_values.size()];
        lp.n_reg = n_values[(trial / 3) % n_values.size()];

        FaceScalarField gn = make_face_field(g);
        FaceVectorField gd = make_face_field(g);
        gn.axis[0][2] = gnorm;
        gd.axis[0][2] = gnorm;  // aligned with the normal
        const FaceVectorField f = limited_flux(gn, gd, lp);
        const double mag = std::abs(f.axis[0][2]);
        CHECK(std::isfinite(mag));
        const double cap = std::min(std::pow(gnorm, lp.p - 1.0), lp.n_reg);
        CHECK(mag <= cap * (1.0 + 1e-14) + 1e-300);
        if (gnorm <= lp.grad_floor) CHECK(mag == 0.0);
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("flux is monotone in n_reg and saturates at g^{p-1}") {
    const Grid g = make_grid(line(5));
    LimiterParams lp;
    lp.p = 1.4;
    const double gnorm = 2.0;
    double prev = 0.0;
    for (double n : {1.0, 10.0, 1e3, 1e6}) {
        lp.n_reg = n;
        FaceScalarField gn = make_face_field(g);
        FaceVectorField gd = make_face_field(g);
        gn.axis[0][2] = gnorm;
        gd.axis[0][2] = gnorm;
        const double mag = limited_flux(gn, gd, lp).axis[0][2];
        CHECK(mag >= prev);
        CHECK(mag == doctest::Approx(limiter_magnitude(gnorm, lp.p, n)).epsilon(1e-15));
        prev = mag;
    }
    lp.n_reg = std::numeric_limits<double>::infinity();
    FaceScalarField gn = make_face_field(g);
    FaceVectorField gd = make_face_field(g);
    gn.axis[0][2] = gnorm;
    gd.axis[0][2] = gnorm;
    CHECK(limited_flux(gn, gd, lp).axis[0][2] ==
          doctest::Approx(std::pow(gnorm, 0.4)).epsilon(1e-14));
}

TEST_CASE("limiter parameter validation") {
    LimiterParams lp;
    lp.p = 2.5;
    CHECK_THROWS_AS(lp.validate(), ConfigError);
    lp.p = 1.0;
    CHECK_THROWS_AS(lp.validate(), ConfigError);
    lp.p = 1.4;
    lp.n_reg = -1.0;
    CHECK_THROWS_AS(lp.validate(), ConfigError);
}

TEST_CASE("upwind divergence: zero flux, hand stencil and conservation") {
    const Grid g = make_grid(line(8));

    const ScalarField d0 =
        upwind_divergence(make_field(g, 1.0), make_face_field(g), 1.0, g);
    for (int c = 0; c < g.num_cells(); ++c) CHECK(d0[c] == 0.0);

    // u == 1, F == 1 on interior faces: sources and sinks only at the walls.
    FaceVectorField f = make_face_field(g);
    for (int i = 1; i < g.nx(); ++i) f.axis[0][i] = 1.0;
    const ScalarField d = upwind_divergence(make_field(g, 1.0), f, 1.0, g);
    CHECK(d[0] == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(d[7] == doctest::Approx(-8.0).epsilon(1e-14));
    for (int c = 1; c < 7; ++c) CHECK(d[c] == 0.0);
    ScalarField dv = d;
    CHECK(integrate(dv, g) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("upwind divergence telescopes on random 2d inputs") {
    const Grid g = make_grid(square(16));
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField u = make_field(g);
        for (auto& v : u.values) v = dist(rng) + 1.5;
        FaceVectorField f = make_face_field(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 1; i < g.nx(); ++i)
                f.axis[0][g.xface_index(i, j)] = dist(rng);
        for (int j = 1; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                f.axis[1][g.yface_index(i, j)] = dist(rng);
        const double chi = 3.0;
        const ScalarField d = upwind_divergence(u, f, chi, g);
        double scale = 0.0;
        for (const auto& ax : f.axis)
            for (double v : ax) scale += std::abs(v);
        scale *= chi * linf_norm(u);
        CHECK(std::abs(integrate(d, g)) <= 1e-13 * std::max(1.0, scale));
    }
}

TEST_CASE("upwind divergence picks the donor cell") {
    const Grid g = make_grid(line(4));
    ScalarField u = make_field(g);
    u[0] = 2.0;
    u[1] = 5.0;
    FaceVectorField f = make_face_field(g);
    f.axis[0][1] = 1.0;  // flow from cell 0 into cell 1: donor is cell 0
    ScalarField d = upwind_divergence(u, f, 1.0, g);
    CHECK(d[0] == doctest::Approx(2.0 / g.cell_volume(0)).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(-2.0 / g.cell_volume(1)).epsilon(1e-14));
    f.axis[0][1] = -1.0;  // reversed: donor is cell 1
    d = upwind_divergence(u, f, 1.0, g);
    CHECK(d[0] == doctest::Approx(-5.0 / g.cell_volume(0)).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(5.0 / g.cell_volume(1)).epsilon(1e-14));
}

TEST_CASE("nonzero boundary flux is rejected") {
    const Grid g = make_grid(line(8));
    FaceVectorField f = make_face_field(g);
    f.axis[0][0] = 0.5;
    CHECK_THROWS_AS(upwind_divergence(make_field(g, 1.0), f, 1.0, g), ConfigError);
}

TEST_CASE("gradient energy of a linear profile") {
    const Grid g = make_grid(line(32));
    const ScalarField u = linear_field(g, 1.0);
    // interior faces contribute area * h each: (n-1) h
    CHECK(gradient_energy(u, g) ==
          doctest::Approx((g.nx() - 1) * g.h(0)).epsilon(1e-13));
}
