#include "chemoflux/cli.hpp"

#include "chemoflux/config.hpp"
#include "chemoflux/errors.hpp"
#include "chemoflux/io.hpp"
#include "chemoflux/numfmt.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace chemoflux {

namespace {

namespace fs = std::filesystem;

Overrides parse_overrides(const std::vector<std::string>& raw) {
    Overrides out;
    for (const auto& s : raw) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--override expects key=value, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

struct RunArtifacts {
    RunResult result;
    std::vector<MonitorRecord> series;
};

RunArtifacts execute(const RunConfig& cfg, const Grid& g) {
    RunArtifacts a;
    const ScalarField u0 = make_initial(cfg.init, g);
    a.result = run(u0, cfg.model, g, cfg.dt, cfg.t_end, cfg.monitor_every,
                   [&](const MonitorRecord& r) { a.series.push_back(r); }, cfg.qlist);
    return a;
}

void write_common_outputs(const RunConfig& cfg, const Grid& g, const RunArtifacts& a) {
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    write_monitor_csv(a.series, (dir / "monitors.csv").string());
    write_snapshot(a.result.final_state.u, g, (dir / "final_u.snap").string());
    std::ofstream echo(dir / "config.txt", std::ios::binary);
    echo << render_config(cfg);

    std::ofstream sum(dir / "summary.csv", std::ios::binary);
    sum << "verdict,t_final,steps,mass_final,min_u_final,max_u_final,"
           "peak_max_u,sup_mass,worst_mass_ode,min_rel_u\n";
    const MonitorRecord& last = a.series.back();
    sum << to_string(a.result.verdict) << ',' << format_g17(a.result.final_state.t) << ','
        << a.result.audit.steps << ',' << format_g17(last.mass) << ','
        << format_g17(last.min_u) << ',' << format_g17(last.max_u) << ','
        << format_g17(a.result.audit.peak_max_u) << ','
        << format_g17(a.result.audit.sup_mass) << ','
        << format_g17(a.result.audit.worst_mass_ode) << ','
        << format_g17(a.result.audit.min_rel_u) << '\n';
}

int command_run(const RunConfig& cfg) {
    const Grid g = make_grid(cfg.grid);
    const RunArtifacts a = execute(cfg, g);
    write_common_outputs(cfg, g, a);
    std::cout << "run " << to_string(a.result.verdict)
              << ": t=" << format_shortest(a.result.final_state.t)
              << " steps=" << a.result.audit.steps
              << " mass=" << format_shortest(a.series.back().mass)
              << " max_u=" << format_shortest(a.series.back().max_u)
              << " -> " << cfg.out_dir << '\n';
    return a.result.verdict == RunVerdict::solver_failure ? 3 : 0;
}

InvariantReport build_report(const RunConfig& cfg, const Grid& g, const RunArtifacts& a) {
    InvariantReport rep;
    const RunAudit& audit = a.result.audit;

    InvariantEntry ode;
    ode.name = "mass_ode_identity";
    ode.margin = audit.worst_mass_ode - 1e-11;
    ode.pass = ode.margin <= 0.0;
    rep.entries.push_back(ode);

    rep.entries.push_back(
        check_mass_bound(a.series, a.series.front().mass, g.total_volume()));

    InvariantEntry growth;
    growth.name = "mass_bound_step";
    growth.margin = audit.worst_mass_growth - 1e-12;
    growth.pass = growth.margin <= 0.0;
    rep.entries.push_back(growth);

    rep.entries.push_back(check_nonnegativity(a.series));

    InvariantEntry neg;
    neg.name = "nonnegativity_step";
    neg.margin = -(audit.min_rel_u + 1e-12);
    neg.pass = neg.margin <= 0.0;
    rep.entries.push_back(neg);

    InvariantEntry res;
    res.name = "elliptic_residual";
    double worst = 0.0, t_worst = 0.0;
    for (const auto& r : a.series)
        if (r.elliptic_residual > worst) {
            worst = r.elliptic_residual;
            t_worst = r.t;
        }
    res.margin = worst - cfg.model.elliptic.rel_tol;
    res.pass = res.margin <= 0.0;
    res.t_worst = t_worst;
    rep.entries.push_back(res);

    InvariantEntry mono;
    mono.name = "grad_energy_monotone";
    double drop = 0.0, t_drop = 0.0;
    for (std::size_t i = 1; i < a.series.size(); ++i) {
        const double d = a.series[i - 1].grad_energy_cum - a.series[i].grad_energy_cum;
        if (d > drop) {
            drop = d;
            t_drop = a.series[i].t;
        }
    }
    mono.margin = drop;
    mono.pass = drop <= 0.0;
    mono.t_worst = t_drop;
    rep.entries.push_back(mono);
    return rep;
}

int command_check(const RunConfig& cfg) {
    const Grid g = make_grid(cfg.grid);
    const RunArtifacts a = execute(cfg, g);
    write_common_outputs(cfg, g, a);
    const InvariantReport rep = build_report(cfg, g, a);

    const fs::path dir(cfg.out_dir);
    std::ofstream out(dir / "invariants.csv", std::ios::binary);
    out << "name,pass,margin,t_worst\n";
    for (const auto& e : rep.entries) {
        out << e.name << ',' << (e.pass ? "true" : "false") << ','
            << format_g17(e.margin) << ',' << format_g17(e.t_worst) << '\n';
        std::cout << (e.pass ? "PASS " : "FAIL ") << e.name
                  << " (margin=" << format_shortest(e.margin) << ")\n";
    }
    std::cout << "check verdict=" << to_string(a.result.verdict)
              << (rep.all_pass() ? " invariants=pass" : " invariants=fail") << '\n';
    if (a.result.verdict == RunVerdict::solver_failure) return 3;
    return rep.all_pass() ? 0 : 1;
}

int command_study(const std::string& kind, const RunConfig& cfg) {
    const CaseConfig base = cfg.to_case();
    StudyResult s;
    if (kind == "reg") {
        s = regularization_study(base, cfg.n_list, cfg.t_eval);
    } else if (kind == "sweep") {
        s = exponent_sweep(base, cfg.p_list, {cfg.grid}, cfg.t_end);
    } else {
        s = mesh_convergence(base, cfg.mesh_cells, cfg.t_eval, cfg.mesh_mode,
                             cfg.mesh_dt_h2);
    }
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    write_study_csv(s, (dir / ("study_" + s.kind + ".csv")).string());
    std::ofstream echo(dir / "config.txt", std::ios::binary);
    echo << render_config(cfg);
    std::cout << "study " << s.kind << " verdict=" << s.verdict << " rows="
              << s.rows.size() << " -> " << cfg.out_dir << '\n';
    return s.passed() ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"chemoflux: finite-volume simulator for flux-limited "
                 "chemotaxis with logistic growth"};
    app.require_subcommand(1);

    std::string config_path, study_kind;
    std::vector<std::string> raw_overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "configuration file")->required();
        cmd->add_option("--override", raw_overrides,
                        "key=value applied on top of the config (repeatable)");
    };

    CLI::App* cmd_run =
        app.add_subcommand("run", "single trajectory with monitors and final snapshot");
    add_common(cmd_run);
    CLI::App* cmd_study = app.add_subcommand("study", "prepackaged study as CSV");
    cmd_study->add_option("kind", study_kind, "reg, sweep or mesh")
        ->required()
        ->check(CLI::IsMember({"reg", "sweep", "mesh"}));
    add_common(cmd_study);
    CLI::App* cmd_check =
        app.add_subcommand("check", "run and evaluate the invariant report");
    add_common(cmd_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = parse_config_file(config_path, parse_overrides(raw_overrides));
        if (cmd_run->parsed()) return command_run(cfg);
        if (cmd_check->parsed()) return command_check(cfg);
        return command_study(study_kind, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace chemoflux
