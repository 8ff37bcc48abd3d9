#pragma once

#include "chemoflux/grid.hpp"

#include <limits>

namespace chemoflux {

/// Parameters of the flux limiter |g|^{p-2} g / (1 + |g|^{p-1}/n_reg).
/// n_reg = infinity leaves the denominator at 1 (unregularized flux);
/// any finite n_reg caps the flux magnitude at n_reg.
struct LimiterParams {
    double p = 1.4;  // exponent, (1,2)
    double n_reg = std::numeric_limits<double>::infinity();
    double grad_floor = 1e-14;  // flux is exactly 0 below this gradient magnitude
    void validate() const;
    bool operator==(const LimiterParams&) const = default;
};

/// Face-normal gradient (v_j - v_i)/h on interior faces, 0 on boundary faces.
FaceVectorField face_gradient(const ScalarField& v, const Grid& g);

/// Full gradient magnitude |grad v| per face. On one-axis grids this is
/// the absolute normal component; on 2d grids the tangential component is
/// reconstructed as the average of the two adjacent cell-centered central
/// differences (one-sided at boundary cells).
FaceScalarField face_gradient_magnitude(const ScalarField& v, const Grid& g);

/// Limited chemotactic flux direction field:
///   F = (|g|^{p-1} / (1 + |g|^{p-1}/n_reg)) * g_normal/|g|
/// evaluated in that stable composite form; F = 0 exactly where
/// |g| <= grad_floor. Requires gnorm >= 0 and gnorm >= |g_normal| per face.
FaceVectorField limited_flux(const FaceScalarField& gnorm, const FaceVectorField& gdir,
                             const LimiterParams& lp);

/// Donor-cell divergence of chi * u * F:
///   D_i = (1/vol_i) sum_f sign_{if} area_f chi F_f u_upwind(f)
/// where u_upwind is the cell the flux flows out of. Boundary faces of F
/// must be zero; the weighted sum of D over all cells telescopes to zero.
ScalarField upwind_divergence(const ScalarField& u, const FaceVectorField& F,
                              double chi, const Grid& g);

/// Discrete Dirichlet energy sum_f area_f (u_j - u_i)^2 / h, the
/// finite-volume form of the squared gradient norm of u.
double gradient_energy(const ScalarField& u, const Grid& g);

} // namespace chemoflux
