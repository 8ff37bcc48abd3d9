#include "chemoflux/experiments.hpp"

#include "chemoflux/errors.hpp"
#include "chemoflux/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace chemoflux {

std::string to_string(InitKind k) {
    switch (k) {
        case InitKind::constant: return "constant";
        case InitKind::gaussian_bump: return "gaussian_bump";
        case InitKind::perturbed_constant: return "perturbed_constant";
    }
    return "?";
}

InitKind init_kind_from_string(const std::string& s) {
    if (s == "constant") return InitKind::constant;
    if (s == "gaussian_bump") return InitKind::gaussian_bump;
    if (s == "perturbed_constant") return InitKind::perturbed_constant;
    throw ConfigError("unknown initial data kind '" + s + "'");
}

namespace {

std::array<double, 2> resolve_center(const InitialData& d, const Grid& g) {
    if (g.kind() == GridKind::radial) {
        if (!std::isnan(d.center[0]) && d.center[0] != 0.0)
            throw ConfigError("init.center: radial initial data must be centered at r = 0");
        return {0.0, 0.0};
    }
    std::array<double, 2> c = {0.0, 0.0};
    for (int a = 0; a < g.naxes(); ++a)
        c[a] = std::isnan(d.center[a]) ? 0.5 * g.spec().extent[a] : d.center[a];
    return c;
}

void check_gaussian_boundary(const InitialData& d, const Grid& g,
                             const std::array<double, 2>& c) {
    const double s2 = d.sigma * d.sigma;
    double worst = 0.0;
    auto wall = [&](double dist) {
        worst = std::max(worst,
                         std::abs(d.amplitude) * dist / s2 * std::exp(-dist * dist / (2.0 * s2)));
    };
    if (g.kind() == GridKind::radial) {
        wall(g.spec().extent[0]);
    } else {
        for (int a = 0; a < g.naxes(); ++a) {
            wall(c[a]);
            wall(g.spec().extent[a] - c[a]);
        }
    }
    if (worst > 1e-12 * std::max(1.0, std::abs(d.amplitude)))
        throw ConfigError(
            "init.sigma: Gaussian too wide for the domain, boundary-normal derivative " +
            format_shortest(worst) + " exceeds 1e-12; reduce sigma or move the center");
}

} // namespace

ScalarField make_initial(const InitialData& data, const Grid& g) {
    ScalarField u = make_field(g);
    const auto c = resolve_center(data, g);
    switch (data.kind) {
        case InitKind::constant: {
            if (!(data.base >= 0.0) || !std::isfinite(data.base))
                throw ConfigError("init.base: nonnegative finite constant required");
            for (auto& v : u.values) v = data.base;
            break;
        }
        case InitKind::gaussian_bump: {
            if (!(data.sigma > 0.0) || !std::isfinite(data.sigma))
                throw ConfigError("init.sigma: positive width required");
            if (!(data.base >= 0.0) || !(data.base + data.amplitude >= 0.0))
                throw ConfigError("init: Gaussian parameters produce negative values");
            check_gaussian_boundary(data, g, c);
            const double inv = 1.0 / (2.0 * data.sigma * data.sigma);
            for (int j = 0; j < g.ny(); ++j) {
                for (int i = 0; i < g.nx(); ++i) {
                    double r2 = 0.0;
                    const double dx = g.cell_center(0, i) - c[0];
                    r2 += dx * dx;
                    if (g.naxes() == 2) {
                        const double dy = g.cell_center(1, j) - c[1];
                        r2 += dy * dy;
                    }
                    u.values[g.cell_index(i, j)] =
                        data.base + data.amplitude * std::exp(-r2 * inv);
                }
            }
            break;
        }
        case InitKind::perturbed_constant: {
            if (!(data.base >= 0.0) || !std::isfinite(data.base))
                throw ConfigError("init.base: nonnegative base level required");
            if (!(std::abs(data.amplitude) <= data.base))
                throw ConfigError(
                    "init.amplitude: |A| <= base required, the perturbed field must stay >= 0");
            for (int a = 0; a < g.naxes(); ++a)
                if (data.modes[a] < 0)
                    throw ConfigError("init.modes: nonnegative mode numbers required");
            for (int j = 0; j < g.ny(); ++j) {
                for (int i = 0; i < g.nx(); ++i) {
                    double prod = std::cos(data.modes[0] * std::numbers::pi *
                                           g.cell_center(0, i) / g.spec().extent[0]);
                    if (g.naxes() == 2)
                        prod *= std::cos(data.modes[1] * std::numbers::pi *
                                         g.cell_center(1, j) / g.spec().extent[1]);
                    u.values[g.cell_index(i, j)] = data.base + data.amplitude * prod;
                }
            }
            break;
        }
    }
    require_finite(u);
    return u;
}

namespace {

std::string grid_label(const GridSpec& s) {
    std::string out = to_string(s.kind) + ":" + std::to_string(s.cells[0]);
    if (s.naxes() == 2) out += "x" + std::to_string(s.cells[1]);
    if (s.kind == GridKind::radial) out += ":N=" + std::to_string(s.dim_n);
    return out;
}

std::string case_stamp(const CaseConfig& c) {
    std::ostringstream os;
    os << "grid=" << grid_label(c.grid) << " ext=" << format_shortest(c.grid.extent[0]);
    if (c.grid.naxes() == 2) os << "x" << format_shortest(c.grid.extent[1]);
    os << " p=" << format_shortest(c.model.limiter.p)
       << " chi=" << format_shortest(c.model.chi) << " mu=" << format_shortest(c.model.mu)
       << " n_reg=" << format_shortest(c.model.limiter.n_reg)
       << " init=" << to_string(c.init.kind) << ":A=" << format_shortest(c.init.amplitude)
       << ":base=" << format_shortest(c.init.base)
       << ":sigma=" << format_shortest(c.init.sigma)
       << " dt_max=" << format_shortest(c.dt.dt_max)
       << " t_end=" << format_shortest(c.t_end);
    return os.str();
}

struct CaseOutcome {
    RunResult result;
    std::vector<MonitorRecord> series;
};

CaseOutcome run_case(const CaseConfig& base, const Grid& g, const ScalarField& u0,
                     const ModelParams& model, const DtPolicy& dt, double t_end,
                     double monitor_every) {
    CaseOutcome out;
    out.result = run(u0, model, g, dt, t_end, monitor_every,
                     [&](const MonitorRecord& r) { out.series.push_back(r); },
                     base.qlist);
    return out;
}

// Volume-weighted restriction of a factor-2-finer field, exact for the
// nested grids produced by the mesh study.
ScalarField restrict_field(const ScalarField& fine, const Grid& gf, const Grid& gc) {
    if (gf.kind() != gc.kind())
        throw ConfigError("restrict_field: grid kinds differ");
    for (int a = 0; a < gc.naxes(); ++a)
        if (gf.spec().cells[a] != 2 * gc.spec().cells[a] ||
            gf.spec().extent[a] != gc.spec().extent[a])
            throw ConfigError("restrict_field: grids are not a factor-2 refinement pair");
    require_same_grid(fine, gf);
    ScalarField out = make_field(gc);
    if (gc.naxes() == 1) {
        for (int i = 0; i < gc.nx(); ++i) {
            const double v0 = gf.cell_volume(2 * i), v1 = gf.cell_volume(2 * i + 1);
            out.values[i] =
                (fine.values[2 * i] * v0 + fine.values[2 * i + 1] * v1) / (v0 + v1);
        }
    } else {
        for (int j = 0; j < gc.ny(); ++j) {
            for (int i = 0; i < gc.nx(); ++i) {
                double s = 0.0;
                for (int dj = 0; dj < 2; ++dj)
                    for (int di = 0; di < 2; ++di)
                        s += fine.values[gf.cell_index(2 * i + di, 2 * j + dj)];
                out.values[gc.cell_index(i, j)] = 0.25 * s;
            }
        }
    }
    return out;
}

std::string verdict_from_errors(const std::vector<double>& errors, double lo, double hi,
                                double& observed_order) {
    observed_order = std::nan("");
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (errors[i] >= errors[i - 1]) return "inconclusive";
    const double e0 = errors[errors.size() - 2], e1 = errors.back();
    observed_order = std::log2(e0 / e1);
    if (observed_order >= lo && observed_order <= hi) return "pass";
    return "fail:order";
}

} // namespace

StudyResult regularization_study(const CaseConfig& base, const std::vector<double>& n_list,
                                 double t_eval) {
    if (n_list.empty()) throw ConfigError("study.n_list: at least one finite n required");
    std::vector<double> ns = n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (double n : ns)
        if (!(n > 0.0) || !std::isfinite(n))
            throw ConfigError("study.n_list: entries must be finite and positive");
    if (!(t_eval > 0.0)) throw ConfigError("study.t_eval: positive time required");

    StudyResult res;
    res.kind = "reg";
    res.columns = {"n_reg", "run_verdict", "e_linf", "e_l2"};
    res.config_stamp = case_stamp(base) + " t_eval=" + format_shortest(t_eval);

    const Grid g = make_grid(base.grid);
    const ScalarField u0 = make_initial(base.init, g);

    auto with_n = [&](double n) {
        ModelParams m = base.model;
        m.limiter.n_reg = n;
        return run_case(base, g, u0, m, base.dt, t_eval, t_eval);
    };

    const CaseOutcome ref = with_n(std::numeric_limits<double>::infinity());
    std::vector<double> e_linf, e_l2;
    std::string first_failure;
    if (ref.result.verdict != RunVerdict::completed)
        first_failure = to_string(ref.result.verdict);

    for (double n : ns) {
        const CaseOutcome o = with_n(n);
        ScalarField diff = o.result.final_state.u;
        for (int c = 0; c < g.num_cells(); ++c)
            diff.values[c] -= ref.result.final_state.u.values[c];
        const double ei = linf_norm(diff), e2 = lq_norm(diff, g, 2.0);
        e_linf.push_back(ei);
        e_l2.push_back(e2);
        res.rows.push_back({format_shortest(n), to_string(o.result.verdict),
                            format_g17(ei), format_g17(e2)});
        if (o.result.verdict != RunVerdict::completed && first_failure.empty())
            first_failure = to_string(o.result.verdict);
    }
    res.rows.push_back({"inf", to_string(ref.result.verdict), format_g17(0.0),
                        format_g17(0.0)});

    if (!first_failure.empty()) {
        res.verdict = "fail:" + first_failure;
        return res;
    }
    bool inconclusive = false;
    std::string verdict = "pass";
    for (const auto& e : {e_linf, e_l2}) {
        for (std::size_t i = 1; i < e.size(); ++i) {
            const double rise = e[i] - e[i - 1];
            if (rise > 1e-10) verdict = "fail:monotonicity";
            else if (rise > 0.0) inconclusive = true;
        }
        if (e.back() > 0.25 * e.front() && verdict == "pass")
            verdict = "fail:ratio";
    }
    res.verdict = verdict == "pass" && inconclusive ? "inconclusive" : verdict;
    return res;
}

StudyResult exponent_sweep(const CaseConfig& base, const std::vector<double>& p_list,
                           const std::vector<GridSpec>& grids, double t_end) {
    if (p_list.empty() || grids.empty())
        throw ConfigError("exponent_sweep: nonempty p_list and grid list required");
    for (double p : p_list)
        if (!(p > 1.0) || !(p < 2.0))
            throw ConfigError("study.p_list: entries must lie in (1,2)");
    StudyResult res;
    res.kind = "sweep";
    res.columns = {"grid", "p", "run_verdict", "boundedness", "peak_max_u", "sup_mass"};
    res.config_stamp = case_stamp(base) + " t_end=" + format_shortest(t_end);
    res.verdict = "info";

    const double cadence = std::min(base.monitor_every, t_end / 20.0);
    for (const GridSpec& spec : grids) {
        const Grid g = make_grid(spec);
        const ScalarField u0 = make_initial(base.init, g);
        for (double p : p_list) {
            ModelParams m = base.model;
            m.limiter.p = p;  // validated inside run()
            const CaseOutcome o = run_case(base, g, u0, m, base.dt, t_end, cadence);
            std::string bounded = "inconclusive";
            if (o.series.size() >= 10)
                bounded = to_string(boundedness_verdict(o.series, base.window_split));
            res.rows.push_back({grid_label(spec), format_shortest(p),
                                to_string(o.result.verdict), bounded,
                                format_g17(o.result.audit.peak_max_u),
                                format_g17(o.result.audit.sup_mass)});
        }
    }
    return res;
}

StudyResult mesh_convergence(const CaseConfig& base, const std::vector<int>& cell_list,
                             double t_eval, MeshMode mode, bool dt_scale_h2) {
    if (cell_list.size() < 3)
        throw ConfigError("study.mesh_cells: at least 3 refinement levels required");
    for (std::size_t i = 1; i < cell_list.size(); ++i)
        if (cell_list[i] != 2 * cell_list[i - 1])
            throw ConfigError("study.mesh_cells: levels must refine by exact factor 2");

    StudyResult res;
    res.kind = "mesh";
    res.config_stamp = case_stamp(base) + " t_eval=" + format_shortest(t_eval) +
                       " mode=" +
                       (mode == MeshMode::full_scheme ? "full" : "elliptic") +
                       " dt_h2=" + (dt_scale_h2 ? "true" : "false");

    auto level_spec = [&](int cells) {
        GridSpec s = base.grid;
        const int c0 = base.grid.cells[0];
        s.cells[0] = cells;
        if (s.naxes() == 2) {
            if ((static_cast<long>(cells) * base.grid.cells[1]) % c0 != 0)
                throw ConfigError("study.mesh_cells: incompatible with the base grid aspect");
            s.cells[1] = static_cast<int>(static_cast<long>(cells) * base.grid.cells[1] / c0);
        }
        return s;
    };

    if (mode == MeshMode::elliptic_manufactured) {
        res.columns = {"cells", "h", "error_l2", "order"};
        std::vector<double> errors;
        for (int cells : cell_list) {
            const Grid g = make_grid(level_spec(cells));
            ScalarField b = make_field(g), exact = make_field(g);
            if (g.kind() == GridKind::radial) {
                const double R = g.spec().extent[0];
                const int N = g.spec().dim_n;
                for (int i = 0; i < g.nx(); ++i) {
                    const double r = g.cell_center(0, i);
                    const double x = r * r * (R - r) * (R - r);
                    const double lap = 2.0 * N * R * R - 6.0 * (N + 1) * R * r +
                                       4.0 * (N + 2) * r * r;
                    exact.values[i] = x;
                    b.values[i] = x - lap;
                }
            } else {
                const double L = g.spec().extent[0];
                const double k = 2.0 * std::numbers::pi / L;
                for (int j = 0; j < g.ny(); ++j) {
                    for (int i = 0; i < g.nx(); ++i) {
                        const double x = std::cos(k * g.cell_center(0, i));
                        exact.values[g.cell_index(i, j)] = x;
                        b.values[g.cell_index(i, j)] = (1.0 + k * k) * x;
                    }
                }
            }
            ScalarField x = solve(b, g, 1.0, 1.0, base.model.elliptic);
            for (int c = 0; c < g.num_cells(); ++c) x.values[c] -= exact.values[c];
            const double err = lq_norm(x, g, 2.0);
            errors.push_back(err);
            res.rows.push_back({std::to_string(cells), format_shortest(g.h(0)),
                                format_g17(err),
                                errors.size() > 1
                                    ? format_g17(std::log2(errors[errors.size() - 2] / err))
                                    : ""});
        }
        double order;
        res.verdict = verdict_from_errors(errors, 1.8, 2.2, order);
        return res;
    }

    res.columns = {"cells", "h", "run_verdict", "diff_l2_to_coarser", "order"};
    std::vector<ScalarField> finals;
    std::vector<Grid> grids;
    std::string failure;
    const double h0 = base.grid.extent[0] / cell_list.front();
    for (int cells : cell_list) {
        const Grid g = make_grid(level_spec(cells));
        const ScalarField u0 = make_initial(base.init, g);
        DtPolicy pol = base.dt;
        if (dt_scale_h2) {
            const double scale = (g.h(0) / h0) * (g.h(0) / h0);
            pol.dt_max = base.dt.dt_max * scale;
            if (pol.dt_max <= pol.dt_min)
                throw ConfigError("study: dt_max scaled below dt_min; raise dt.max or lower dt.min");
        }
        const CaseOutcome o = run_case(base, g, u0, base.model, pol, t_eval, t_eval);
        if (o.result.verdict != RunVerdict::completed && failure.empty())
            failure = to_string(o.result.verdict);
        res.rows.push_back({std::to_string(cells), format_shortest(g.h(0)),
                            to_string(o.result.verdict), "", ""});
        finals.push_back(o.result.final_state.u);
        grids.push_back(g);
    }
    if (!failure.empty()) {
        res.verdict = "fail:" + failure;
        return res;
    }
    std::vector<double> errors;
    for (std::size_t l = 0; l + 1 < finals.size(); ++l) {
        ScalarField diff = restrict_field(finals[l + 1], grids[l + 1], grids[l]);
        for (int c = 0; c < grids[l].num_cells(); ++c)
            diff.values[c] -= finals[l].values[c];
        errors.push_back(lq_norm(diff, grids[l], 2.0));
        res.rows[l][3] = format_g17(errors.back());
        if (errors.size() > 1)
            res.rows[l][4] = format_g17(std::log2(errors[errors.size() - 2] / errors.back()));
    }
    double order;
    res.verdict = verdict_from_errors(errors, 0.8, 1.5, order);
    return res;
}

} // namespace chemoflux
