#pragma once

#include "chemoflux/experiments.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chemoflux {

/// Full run/study configuration. Parsed from a dotted key=value document;
/// every field has a documented default except grid.kind and model.p.
/// Unknown keys are rejected.
struct RunConfig {
    GridSpec grid;
    ModelParams model;
    DtPolicy dt;
    InitialData init;
    double t_end = 20.0;
    double monitor_every = 0.5;
    std::vector<double> qlist = {1.0, 2.0, 4.0};
    std::string out_dir = "out";
    double window_split = 0.5;
    std::vector<double> n_list = {1.0, 4.0, 16.0, 64.0};
    double t_eval = 1.0;
    std::vector<double> p_list = {1.2, 1.4, 1.45};
    std::vector<int> mesh_cells = {64, 128, 256};
    MeshMode mesh_mode = MeshMode::full_scheme;
    bool mesh_dt_h2 = true;

    CaseConfig to_case() const;
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a key=value document ('#' comments, dotted sections). Overrides
/// are applied on top before validation. Errors carry key path and line.
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});
RunConfig parse_config_file(const std::string& path, const Overrides& overrides = {});

/// Canonical echo: parse(render_config(c)) == c exactly.
std::string render_config(const RunConfig& cfg);

} // namespace chemoflux
