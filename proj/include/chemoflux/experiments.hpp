#pragma once

#include "chemoflux/integrator.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace chemoflux {

enum class InitKind { constant, gaussian_bump, perturbed_constant };
std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string& s);

/// Analytic initial-data generators. All profiles are Neumann-compatible
/// by construction: cosine modes exactly, Gaussians by requiring the
/// boundary-normal derivative below 1e-12. Nonnegativity is enforced on
/// the parameters, never by clipping the generated field.
struct InitialData {
    InitKind kind = InitKind::gaussian_bump;
    double amplitude = 4.0;  // A
    // NaN means the domain center (r = 0 for radial grids).
    std::array<double, 2> center = {std::nan(""), std::nan("")};
    double sigma = 0.05;
    double base = 0.0;  // c: constant level / Gaussian offset / perturbed base
    std::array<int, 2> modes = {1, 1};

    bool operator==(const InitialData& o) const {
        auto eq = [](double a, double b) {
            return (std::isnan(a) && std::isnan(b)) || a == b;
        };
        return kind == o.kind && amplitude == o.amplitude && eq(center[0], o.center[0]) &&
               eq(center[1], o.center[1]) && sigma == o.sigma && base == o.base &&
               modes == o.modes;
    }
};

ScalarField make_initial(const InitialData& data, const Grid& g);

/// Everything one simulation case needs; studies vary one knob at a time
/// against this base.
struct CaseConfig {
    GridSpec grid;
    ModelParams model;
    DtPolicy dt;
    InitialData init;
    double t_end = 20.0;
    double monitor_every = 0.5;
    std::vector<double> qlist = {1.0, 2.0, 4.0};
    double window_split = 0.5;
    bool operator==(const CaseConfig&) const = default;
};

/// Tabular study outcome. Every configuration appears as a row, failures
/// included; rerunning a study reproduces the rows exactly.
struct StudyResult {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::string verdict;       // "pass", "fail:...", "inconclusive" or "info"
    std::string config_stamp;  // reproducibility echo of the configuration
    bool passed() const { return verdict == "pass" || verdict == "info"; }
};

/// Runs the base case with each finite regularization index n and with
/// n = inf, comparing states at t_eval. Passes when the errors decay
/// monotonically in n and the finest finite n lands at <= 25% of the
/// coarsest.
StudyResult regularization_study(const CaseConfig& base, const std::vector<double>& n_list,
                                 double t_eval);

/// Classification sweep over limiter exponents and grids: boundedness
/// verdict, peak density and run verdict per row. Informational; rows
/// with aborts are data, not errors.
StudyResult exponent_sweep(const CaseConfig& base, const std::vector<double>& p_list,
                           const std::vector<GridSpec>& grids, double t_end);

enum class MeshMode { full_scheme, elliptic_manufactured };

/// Self-convergence over factor-2 refinements (full scheme, successive
/// L2 differences, order expected in [0.8, 1.5]) or manufactured-solution
/// convergence of the elliptic solve alone (order expected in [1.8, 2.2]).
/// dt_scale_h2 pins dt_max proportional to h^2 across levels.
StudyResult mesh_convergence(const CaseConfig& base, const std::vector<int>& cell_list,
                             double t_eval, MeshMode mode, bool dt_scale_h2);

} // namespace chemoflux
