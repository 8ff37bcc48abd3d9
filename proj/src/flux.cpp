#include "chemoflux/flux.hpp"

#include "chemoflux/errors.hpp"

#include <cmath>

namespace chemoflux {

void LimiterParams::validate() const {
    if (!(p > 1.0) || !(p < 2.0))
        throw ConfigError("model.p: p in (1,2) required");
    if (!(n_reg > 0.0))  // infinity passes
        throw ConfigError("model.n_reg: positive value or inf required");
    if (!(grad_floor >= 0.0) || !std::isfinite(grad_floor))
        throw ConfigError("model.grad_floor: nonnegative finite value required");
}

FaceVectorField face_gradient(const ScalarField& v, const Grid& g) {
    require_same_grid(v, g);
    FaceVectorField out = make_face_field(g);
    const int nx = g.nx(), ny = g.ny();
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            out.axis[0][g.xface_index(i, j)] =
                (v.values[g.cell_index(i, j)] - v.values[g.cell_index(i - 1, j)]) / g.h(0);
    if (g.naxes() == 2)
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                out.axis[1][g.yface_index(i, j)] =
                    (v.values[g.cell_index(i, j)] - v.values[g.cell_index(i, j - 1)]) / g.h(1);
    return out;
}

namespace {

// Cell-centered derivative of v along `axis`, central in the interior,
// one-sided in boundary cells.
double cell_derivative(const ScalarField& v, const Grid& g, int i, int j, int axis) {
    const int n = axis == 0 ? g.nx() : g.ny();
    const double h = g.h(axis);
    const int k = axis == 0 ? i : j;
    auto at = [&](int m) {
        return axis == 0 ? v.values[g.cell_index(m, j)] : v.values[g.cell_index(i, m)];
    };
    if (k == 0) return (at(1) - at(0)) / h;
    if (k == n - 1) return (at(n - 1) - at(n - 2)) / h;
    return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

} // namespace

FaceScalarField face_gradient_magnitude(const ScalarField& v, const Grid& g) {
    require_same_grid(v, g);
    FaceScalarField out = make_face_field(g);
    const FaceVectorField grad = face_gradient(v, g);
    const int nx = g.nx(), ny = g.ny();
    if (g.naxes() == 1) {
        for (int f = 1; f < nx; ++f) out.axis[0][f] = std::abs(grad.axis[0][f]);
        return out;
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const double gn = grad.axis[0][g.xface_index(i, j)];
            const double gt = 0.5 * (cell_derivative(v, g, i - 1, j, 1) +
                                     cell_derivative(v, g, i, j, 1));
            out.axis[0][g.xface_index(i, j)] = std::hypot(gn, gt);
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double gn = grad.axis[1][g.yface_index(i, j)];
            const double gt = 0.5 * (cell_derivative(v, g, i, j - 1, 0) +
                                     cell_derivative(v, g, i, j, 0));
            out.axis[1][g.yface_index(i, j)] = std::hypot(gn, gt);
        }
    }
    return out;
}

FaceVectorField limited_flux(const FaceScalarField& gnorm, const FaceVectorField& gdir,
                             const LimiterParams& lp) {
    lp.validate();
    const double inv_n = 1.0 / lp.n_reg;  // 0 for n_reg = inf
    FaceVectorField out;
    out.grid_tag = gdir.grid_tag;
    for (int a = 0; a < 2; ++a) {
        const auto& gn = gnorm.axis[a];
        const auto& gd = gdir.axis[a];
        if (gn.size() != gd.size())
            throw GridMismatch("gnorm and gdir face layouts differ");
        auto& f = out.axis[a];
        f.assign(gd.size(), 0.0);
        for (std::size_t k = 0; k < gd.size(); ++k) {
            const double n = gn[k];
            if (!(n >= 0.0)) throw ConfigError("limited_flux: gnorm must be >= 0");
            if (n <= lp.grad_floor) continue;
            // |g|^{p-2} g is never formed; the composite keeps p>1 finite at g->0.
            const double s = std::pow(n, lp.p - 1.0);
            f[k] = (s / (1.0 + inv_n * s)) * (gd[k] / n);
        }
    }
    return out;
}

ScalarField upwind_divergence(const ScalarField& u, const FaceVectorField& F,
                              double chi, const Grid& g) {
    require_same_grid(u, g);
    require_same_grid(F, g);
    const int nx = g.nx(), ny = g.ny();
    for (int j = 0; j < ny; ++j) {
        if (F.axis[0][g.xface_index(0, j)] != 0.0 ||
            F.axis[0][g.xface_index(nx, j)] != 0.0)
            throw ConfigError("upwind_divergence: boundary faces of F must be 0");
    }
    if (g.naxes() == 2) {
        for (int i = 0; i < nx; ++i) {
            if (F.axis[1][g.yface_index(i, 0)] != 0.0 ||
                F.axis[1][g.yface_index(i, ny)] != 0.0)
                throw ConfigError("upwind_divergence: boundary faces of F must be 0");
        }
    }

    std::vector<double> net(g.num_cells(), 0.0);
    auto add_face = [&](int cl, int cr, double f, double area) {
        if (f == 0.0) return;
        const double donor = f > 0.0 ? u.values[cl] : u.values[cr];
        const double flux = chi * f * donor * area;
        net[cl] += flux;  // face normal points from cl to cr
        net[cr] -= flux;
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            add_face(g.cell_index(i - 1, j), g.cell_index(i, j),
                     F.axis[0][g.xface_index(i, j)], g.face_area(0, g.xface_index(i, j)));
    if (g.naxes() == 2)
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                add_face(g.cell_index(i, j - 1), g.cell_index(i, j),
                         F.axis[1][g.yface_index(i, j)], g.face_area(1, g.yface_index(i, j)));

    ScalarField out = make_field(g);
    for (int c = 0; c < g.num_cells(); ++c) out.values[c] = net[c] / g.cell_volume(c);
    return out;
}

double gradient_energy(const ScalarField& u, const Grid& g) {
    require_same_grid(u, g);
    const int nx = g.nx(), ny = g.ny();
    double e = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const double d = u.values[g.cell_index(i, j)] - u.values[g.cell_index(i - 1, j)];
            e += g.face_area(0, g.xface_index(i, j)) * d * d / g.h(0);
        }
    }
    if (g.naxes() == 2) {
        for (int j = 1; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const double d = u.values[g.cell_index(i, j)] - u.values[g.cell_index(i, j - 1)];
                e += g.face_area(1, g.yface_index(i, j)) * d * d / g.h(1);
            }
        }
    }
    return e;
}

} // namespace chemoflux
