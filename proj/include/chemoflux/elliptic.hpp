#pragma once

#include "chemoflux/grid.hpp"

#include <vector>

namespace chemoflux {

struct EllipticOptions {
    double rel_tol = 1e-10;
    int max_iter = 0;  // 0 means 10 * cell count
    void validate() const;
    bool operator==(const EllipticOptions&) const = default;
};

/// Applies (c0 I - c1 Lap_h) x with the conservative finite-volume
/// Laplacian: face flux (x_j - x_i)/h times face area, summed over the
/// faces of each cell and divided by the cell volume. Boundary faces
/// carry zero flux (homogeneous Neumann).
ScalarField apply_operator(const ScalarField& x, const Grid& g, double c0, double c1);

/// Solves (c0 I - c1 Lap_h) x = b on one grid. The operator is an SPD
/// M-matrix in the volume-weighted inner product.
///
/// Solve strategy: a direct fast path where the grid structure admits one
/// (Thomas elimination on the tridiagonal 1d/radial systems, DCT
/// diagonalization on uniform Cartesian 2d grids), verified against the
/// requested residual and polished with volume-weighted Jacobi-PCG when
/// the direct result falls short. PCG is also the general fallback and
/// honors an explicit warm start. Every path finishes with a mean
/// correction so that c0 * integral(x) = integral(b) holds to summation
/// accuracy, the discrete form of integrating the equation over the
/// domain with zero boundary flux.
///
/// One instance caches plans and scratch buffers for a single grid; use
/// distinct instances for concurrent solves.
enum class EllipticMethod { automatic, iterative };

class EllipticSolver {
  public:
    explicit EllipticSolver(const Grid& g,
                            EllipticMethod method = EllipticMethod::automatic);
    ~EllipticSolver();
    EllipticSolver(const EllipticSolver&) = delete;
    EllipticSolver& operator=(const EllipticSolver&) = delete;

    const Grid& grid() const { return grid_; }

    ScalarField solve(const ScalarField& b, double c0, double c1,
                      const EllipticOptions& opts,
                      const ScalarField* warm_start = nullptr);

    int last_iterations() const { return last_iterations_; }
    double last_residual() const { return last_residual_; }

  private:
    void solve_tridiagonal(const ScalarField& b, double c0, double c1, ScalarField& x);
    void solve_dct(const ScalarField& b, double c0, double c1, ScalarField& x);
    // returns achieved relative residual
    double pcg(const ScalarField& b, double c0, double c1,
               const EllipticOptions& opts, ScalarField& x, double b_norm);
    double relative_residual(const ScalarField& x, const ScalarField& b,
                             double c0, double c1, double b_norm) const;

    Grid grid_;
    EllipticMethod method_ = EllipticMethod::automatic;
    bool has_dct_ = false;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    double* dct_buf_ = nullptr;
    std::vector<double> eig_[2];  // per-axis Laplacian eigenvalues (DCT basis)
    std::vector<double> tri_lower_, tri_diag_, tri_upper_, tri_scratch_;
    int last_iterations_ = 0;
    double last_residual_ = 0.0;
};

/// One-shot solve; builds a throwaway solver. Prefer EllipticSolver in
/// time-stepping loops.
ScalarField solve(const ScalarField& b, const Grid& g, double c0, double c1,
                  const EllipticOptions& opts, const ScalarField* warm_start = nullptr);

/// Convenience wrapper for the chemical equation: solves (I - Lap_h) v = u.
ScalarField solve_v(const ScalarField& u, const Grid& g, const EllipticOptions& opts);

} // namespace chemoflux
