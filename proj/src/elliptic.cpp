#include "chemoflux/elliptic.hpp"

#include "chemoflux/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace chemoflux {

void EllipticOptions::validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-4)
        throw ConfigError("elliptic.rel_tol: value in (0, 1e-4] required");
    if (max_iter != 0 && max_iter < 10)
        throw ConfigError("elliptic.max_iter: at least 10 (or 0 for automatic)");
}

namespace {

void check_coefficients(double c0, double c1) {
    if (!(c0 > 0.0) || !(c1 >= 0.0))
        throw ConfigError("elliptic operator requires c0 > 0 and c1 >= 0");
}

// Accumulates the net face flux of x into each cell (conservative form).
// Boundary faces are skipped: zero flux is the Neumann condition.
void accumulate_fluxes(const ScalarField& x, const Grid& g,
                       std::vector<double>& flux_sum) {
    const int nx = g.nx(), ny = g.ny();
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const int cl = g.cell_index(i - 1, j), cr = g.cell_index(i, j);
            const double flux = g.face_area(0, g.xface_index(i, j)) *
                                (x.values[cr] - x.values[cl]) / g.h(0);
            flux_sum[cl] += flux;
            flux_sum[cr] -= flux;
        }
    }
    if (g.naxes() == 2) {
        for (int j = 1; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int cd = g.cell_index(i, j - 1), cu = g.cell_index(i, j);
                const double flux = g.face_area(1, g.yface_index(i, j)) *
                                    (x.values[cu] - x.values[cd]) / g.h(1);
                flux_sum[cd] += flux;
                flux_sum[cu] -= flux;
            }
        }
    }
}

double norm2_volume(const ScalarField& f, const Grid& g) {
    return std::sqrt(dot_volume(f, f, g));
}

std::mutex fftw_plan_mutex;

} // namespace

ScalarField apply_operator(const ScalarField& x, const Grid& g, double c0, double c1) {
    require_same_grid(x, g);
    check_coefficients(c0, c1);
    const int n = g.num_cells();
    std::vector<double> flux_sum(n, 0.0);
    accumulate_fluxes(x, g, flux_sum);
    ScalarField out = make_field(g);
    for (int c = 0; c < n; ++c)
        out.values[c] = c0 * x.values[c] - c1 * (flux_sum[c] / g.cell_volume(c));
    return out;
}

EllipticSolver::EllipticSolver(const Grid& g, EllipticMethod method)
    : grid_(g), method_(method) {
    if (method_ == EllipticMethod::iterative) return;
    if (grid_.kind() == GridKind::cartesian2d) {
        has_dct_ = true;
        const int nx = grid_.nx(), ny = grid_.ny();
        for (int a = 0; a < 2; ++a) {
            const int n = a == 0 ? nx : ny;
            eig_[a].resize(n);
            for (int k = 0; k < n; ++k) {
                const double s = std::sin(0.5 * std::numbers::pi * k / n);
                eig_[a][k] = 4.0 * s * s / (grid_.h(a) * grid_.h(a));
            }
        }
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        dct_buf_ = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
        plan_fwd_ = fftw_plan_r2r_2d(ny, nx, dct_buf_, dct_buf_,
                                     FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        plan_bwd_ = fftw_plan_r2r_2d(ny, nx, dct_buf_, dct_buf_,
                                     FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    } else {
        const int n = grid_.nx();
        tri_lower_.resize(n);
        tri_diag_.resize(n);
        tri_upper_.resize(n);
        tri_scratch_.resize(n);
    }
}

EllipticSolver::~EllipticSolver() {
    if (has_dct_) {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
        fftw_free(dct_buf_);
    }
}

void EllipticSolver::solve_tridiagonal(const ScalarField& b, double c0, double c1,
                                       ScalarField& x) {
    const Grid& g = grid_;
    const int n = g.nx();
    const double h = g.h(0);
    for (int i = 0; i < n; ++i) {
        const double al = i > 0 ? g.face_area(0, i) : 0.0;      // zero-flux boundary
        const double ar = i < n - 1 ? g.face_area(0, i + 1) : 0.0;
        const double w = c1 / (h * g.cell_volume(i));
        tri_lower_[i] = -w * al;
        tri_diag_[i] = c0 + w * (al + ar);
        tri_upper_[i] = -w * ar;
    }
    // Thomas elimination; the system is diagonally dominant, no pivoting.
    std::vector<double>& dp = tri_scratch_;
    dp[0] = tri_diag_[0];
    x.values[0] = b.values[0];
    for (int i = 1; i < n; ++i) {
        const double m = tri_lower_[i] / dp[i - 1];
        dp[i] = tri_diag_[i] - m * tri_upper_[i - 1];
        x.values[i] = b.values[i] - m * x.values[i - 1];
    }
    x.values[n - 1] /= dp[n - 1];
    for (int i = n - 2; i >= 0; --i)
        x.values[i] = (x.values[i] - tri_upper_[i] * x.values[i + 1]) / dp[i];
}

void EllipticSolver::solve_dct(const ScalarField& b, double c0, double c1,
                               ScalarField& x) {
    const int nx = grid_.nx(), ny = grid_.ny();
    const int n = nx * ny;
    for (int c = 0; c < n; ++c) dct_buf_[c] = b.values[c];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 4.0 * nx * ny;  // REDFT10 then REDFT01 gains 2n per axis
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            dct_buf_[j * nx + i] /= (c0 + c1 * (eig_[0][i] + eig_[1][j])) * scale;
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    for (int c = 0; c < n; ++c) x.values[c] = dct_buf_[c];
}

double EllipticSolver::relative_residual(const ScalarField& x, const ScalarField& b,
                                         double c0, double c1, double b_norm) const {
    ScalarField ax = apply_operator(x, grid_, c0, c1);
    for (int c = 0; c < grid_.num_cells(); ++c)
        ax.values[c] = b.values[c] - ax.values[c];
    const double r = norm2_volume(ax, grid_);
    return b_norm > 0.0 ? r / b_norm : r;
}

double EllipticSolver::pcg(const ScalarField& b, double c0, double c1,
                           const EllipticOptions& opts, ScalarField& x, double b_norm) {
    const Grid& g = grid_;
    const int n = g.num_cells();
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * n;

    // Jacobi preconditioner: the operator diagonal.
    std::vector<double> inv_diag(n);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int c = g.cell_index(i, j);
            double coupling = 0.0;
            if (i > 0) coupling += g.face_area(0, g.xface_index(i, j)) / g.h(0);
            if (i < g.nx() - 1)
                coupling += g.face_area(0, g.xface_index(i + 1, j)) / g.h(0);
            if (g.naxes() == 2) {
                if (j > 0) coupling += g.face_area(1, g.yface_index(i, j)) / g.h(1);
                if (j < g.ny() - 1)
                    coupling += g.face_area(1, g.yface_index(i, j + 1)) / g.h(1);
            }
            inv_diag[c] = 1.0 / (c0 + c1 * coupling / g.cell_volume(c));
        }
    }

    ScalarField r = apply_operator(x, g, c0, c1);
    for (int c = 0; c < n; ++c) r.values[c] = b.values[c] - r.values[c];
    ScalarField z = make_field(g), p = make_field(g);
    for (int c = 0; c < n; ++c) z.values[c] = r.values[c] * inv_diag[c];
    p.values = z.values;
    double rz = dot_volume(r, z, g);
    double res = norm2_volume(r, g) / (b_norm > 0.0 ? b_norm : 1.0);

    int iter = 0;
    while (res > opts.rel_tol && iter < max_iter) {
        ScalarField q = apply_operator(p, g, c0, c1);
        const double pq = dot_volume(p, q, g);
        if (!(pq > 0.0)) break;  // breakdown; residual reported below
        const double alpha = rz / pq;
        for (int c = 0; c < n; ++c) {
            x.values[c] += alpha * p.values[c];
            r.values[c] -= alpha * q.values[c];
        }
        res = norm2_volume(r, g) / (b_norm > 0.0 ? b_norm : 1.0);
        for (int c = 0; c < n; ++c) z.values[c] = r.values[c] * inv_diag[c];
        const double rz_new = dot_volume(r, z, g);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int c = 0; c < n; ++c) p.values[c] = z.values[c] + beta * p.values[c];
        ++iter;
    }
    last_iterations_ += iter;
    return res;
}

ScalarField EllipticSolver::solve(const ScalarField& b, double c0, double c1,
                                  const EllipticOptions& opts,
                                  const ScalarField* warm_start) {
    require_same_grid(b, grid_);
    check_coefficients(c0, c1);
    opts.validate();
    last_iterations_ = 0;

    const double b_norm = norm2_volume(b, grid_);
    ScalarField x = make_field(grid_);
    if (b_norm == 0.0) {
        last_residual_ = 0.0;
        return x;
    }

    double res;
    if (has_dct_) {
        solve_dct(b, c0, c1, x);
        res = relative_residual(x, b, c0, c1, b_norm);
    } else if (method_ != EllipticMethod::iterative && grid_.naxes() == 1) {
        solve_tridiagonal(b, c0, c1, x);
        res = relative_residual(x, b, c0, c1, b_norm);
    } else {
        if (warm_start) {
            require_same_grid(*warm_start, grid_);
            x.values = warm_start->values;
        }
        res = opts.rel_tol * 2.0;  // force the PCG loop
    }
    if (res > opts.rel_tol) res = pcg(b, c0, c1, opts, x, b_norm);
    if (res > opts.rel_tol) {
        std::ostringstream msg;
        msg << "elliptic solve did not reach rel_tol " << opts.rel_tol
            << " (residual " << res << ")";
        throw SolverError(msg.str(), res);
    }

    // Mean correction: the row sums of the operator leave only c0 I, so
    // the exact solution satisfies c0 integral(x) = integral(b).
    const double shift =
        (integrate(b, grid_) - c0 * integrate(x, grid_)) / (c0 * grid_.total_volume());
    for (double& v : x.values) v += shift;

    last_residual_ = res;
    require_finite(x);
    return x;
}

ScalarField solve(const ScalarField& b, const Grid& g, double c0, double c1,
                  const EllipticOptions& opts, const ScalarField* warm_start) {
    EllipticSolver solver(g);
    return solver.solve(b, c0, c1, opts, warm_start);
}

ScalarField solve_v(const ScalarField& u, const Grid& g, const EllipticOptions& opts) {
    EllipticSolver solver(g);
    return solver.solve(u, 1.0, 1.0, opts);
}

} // namespace chemoflux
