#include "chemoflux/config.hpp"

#include "chemoflux/errors.hpp"
#include "chemoflux/numfmt.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chemoflux {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;  // 0 means command-line override
    bool consumed = false;
};

class Doc {
  public:
    Doc(const std::string& text, const Overrides& overrides) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (auto it = entries_.find(key); it != entries_.end())
                throw ConfigError("duplicate key '" + key + "' (line " +
                                  std::to_string(lineno) + ", first at line " +
                                  std::to_string(it->second.line) + ")");
            entries_[key] = {value, lineno};
        }
        for (const auto& [k, v] : overrides) entries_[trim(k)] = {trim(v), 0};
    }

    std::string where(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return "key '" + key + "'";
        if (it->second.line == 0) return "key '" + key + "' (override)";
        return "key '" + key + "' (line " + std::to_string(it->second.line) + ")";
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? -1 : it->second.line;
    }

    std::string take(const std::string& key) {
        auto& e = entries_.at(key);
        e.consumed = true;
        return e.value;
    }

    std::string get_string(const std::string& key, const std::string& dflt) {
        return has(key) ? take(key) : dflt;
    }

    double get_double(const std::string& key, double dflt) {
        if (!has(key)) return dflt;
        return parse_scalar(key, take(key));
    }

    double get_double_required(const std::string& key) {
        if (!has(key)) throw ConfigError("missing required key '" + key + "'");
        return parse_scalar(key, take(key));
    }

    int get_int(const std::string& key, int dflt) {
        if (!has(key)) return dflt;
        return parse_int(key, take(key));
    }

    bool get_bool(const std::string& key, bool dflt) {
        if (!has(key)) return dflt;
        const std::string v = take(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError(where(key) + ": expected true or false, got '" + v + "'");
    }

    std::vector<double> get_doubles(const std::string& key, std::vector<double> dflt) {
        if (!has(key)) return dflt;
        std::vector<double> out;
        for (const std::string& tok : split(take(key)))
            out.push_back(parse_scalar(key, tok));
        if (out.empty()) throw ConfigError(where(key) + ": empty list");
        return out;
    }

    std::vector<int> get_ints(const std::string& key, std::vector<int> dflt) {
        if (!has(key)) return dflt;
        std::vector<int> out;
        for (const std::string& tok : split(take(key)))
            out.push_back(parse_int(key, tok));
        if (out.empty()) throw ConfigError(where(key) + ": empty list");
        return out;
    }

    void finish() const {
        for (const auto& [key, e] : entries_)
            if (!e.consumed)
                throw ConfigError("unknown " + where(key));
    }

  private:
    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) out.push_back(tok);
        return out;
    }

    double parse_scalar(const std::string& key, const std::string& tok) const {
        try {
            return parse_double(tok);
        } catch (const ConfigError&) {
            throw ConfigError(where(key) + ": not a number: '" + tok + "'");
        }
    }

    int parse_int(const std::string& key, const std::string& tok) const {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": not an integer: '" + tok + "'");
        }
    }

    std::map<std::string, Entry> entries_;
};

int default_dim_n(GridKind kind) {
    switch (kind) {
        case GridKind::cartesian1d: return 1;
        case GridKind::cartesian2d: return 2;
        case GridKind::radial: return 3;
    }
    return 2;
}

} // namespace

void RunConfig::validate() const {
    grid.validate();
    model.validate();
    dt.validate();
    // Full initial-data validation needs the mesh (boundary compatibility).
    const Grid g = make_grid(grid);
    (void)make_initial(init, g);
    if (!(t_end > 0.0)) throw ConfigError("run.t_end: positive time required");
    if (!(monitor_every > 0.0))
        throw ConfigError("run.monitor_every: positive interval required");
    if (qlist.empty()) throw ConfigError("run.q_list: at least one exponent required");
    for (double q : qlist)
        if (!(q >= 1.0)) throw ConfigError("run.q_list: entries must be >= 1");
    if (!(window_split > 0.0) || !(window_split < 1.0))
        throw ConfigError("run.window_split: value in (0,1) required");
    if (out_dir.empty()) throw ConfigError("run.out_dir: nonempty path required");
    if (!(t_eval > 0.0)) throw ConfigError("study.t_eval: positive time required");
    if (n_list.empty()) throw ConfigError("study.n_list: at least one entry required");
    for (double n : n_list)
        if (!(n > 0.0) || !std::isfinite(n))
            throw ConfigError("study.n_list: entries must be finite and positive");
    for (double p : p_list)
        if (!(p > 1.0) || !(p < 2.0))
            throw ConfigError("study.p_list: entries must lie in (1,2)");
    if (mesh_cells.size() < 3)
        throw ConfigError("study.mesh_cells: at least 3 refinement levels required");
    for (std::size_t i = 1; i < mesh_cells.size(); ++i)
        if (mesh_cells[i] != 2 * mesh_cells[i - 1])
            throw ConfigError("study.mesh_cells: levels must refine by exact factor 2");
}

CaseConfig RunConfig::to_case() const {
    CaseConfig c;
    c.grid = grid;
    c.model = model;
    c.dt = dt;
    c.init = init;
    c.t_end = t_end;
    c.monitor_every = monitor_every;
    c.qlist = qlist;
    c.window_split = window_split;
    return c;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
    Doc doc(text, overrides);
    RunConfig cfg;

    if (!doc.has("grid.kind")) throw ConfigError("missing required key 'grid.kind'");
    try {
        cfg.grid.kind = grid_kind_from_string(doc.take("grid.kind"));
    } catch (const ConfigError& e) {
        throw ConfigError(doc.where("grid.kind") + ": " + e.what());
    }
    const int naxes = cfg.grid.kind == GridKind::cartesian2d ? 2 : 1;
    cfg.grid.dim_n = doc.get_int("grid.dim_n", default_dim_n(cfg.grid.kind));

    std::vector<int> cells = doc.get_ints("grid.cells", {128});
    if (static_cast<int>(cells.size()) > naxes)
        throw ConfigError(doc.where("grid.cells") + ": at most " + std::to_string(naxes) +
                          " value(s) for this grid kind");
    cfg.grid.cells[0] = cells[0];
    cfg.grid.cells[1] = naxes == 2 ? (cells.size() == 2 ? cells[1] : cells[0]) : 1;

    std::vector<double> extent = doc.get_doubles("grid.extent", {1.0});
    if (static_cast<int>(extent.size()) > naxes)
        throw ConfigError(doc.where("grid.extent") + ": at most " + std::to_string(naxes) +
                          " value(s) for this grid kind");
    cfg.grid.extent[0] = extent[0];
    cfg.grid.extent[1] = naxes == 2 ? (extent.size() == 2 ? extent[1] : extent[0]) : 1.0;

    cfg.model.limiter.p = doc.get_double_required("model.p");
    cfg.model.chi = doc.get_double("model.chi", 10.0);
    cfg.model.mu = doc.get_double("model.mu", 1.0);
    cfg.model.limiter.n_reg =
        doc.get_double("model.n_reg", std::numeric_limits<double>::infinity());
    cfg.model.limiter.grad_floor = doc.get_double("model.grad_floor", 1e-14);
    cfg.model.elliptic.rel_tol = doc.get_double("elliptic.rel_tol", 1e-10);
    cfg.model.elliptic.max_iter = doc.get_int("elliptic.max_iter", 0);

    cfg.dt.dt_max = doc.get_double("dt.max", 1e-2);
    cfg.dt.safety = doc.get_double("dt.safety", 0.9);
    cfg.dt.dt_min = doc.get_double("dt.min", 1e-12);
    cfg.dt.blowup_threshold = doc.get_double("dt.blowup_threshold", 1e6);

    try {
        cfg.init.kind =
            init_kind_from_string(doc.get_string("init.kind", "gaussian_bump"));
    } catch (const ConfigError& e) {
        throw ConfigError(doc.where("init.kind") + ": " + e.what());
    }
    cfg.init.amplitude = doc.get_double("init.amplitude", 4.0);
    cfg.init.sigma = doc.get_double("init.sigma", 0.05);
    cfg.init.base = doc.get_double("init.base", 0.0);
    if (doc.has("init.center")) {
        const std::string raw = doc.take("init.center");
        if (raw == "auto") {
            cfg.init.center = {std::nan(""), std::nan("")};
        } else {
            std::istringstream in(raw);
            std::vector<std::string> toks;
            std::string t;
            while (in >> t) toks.push_back(t);
            if (toks.empty() || static_cast<int>(toks.size()) > naxes)
                throw ConfigError(doc.where("init.center") +
                                  ": 'auto' or one value per axis");
            try {
                cfg.init.center[0] = parse_double(toks[0]);
                cfg.init.center[1] =
                    naxes == 2 ? parse_double(toks.size() == 2 ? toks[1] : toks[0])
                               : std::nan("");
            } catch (const ConfigError&) {
                throw ConfigError(doc.where("init.center") + ": not a number");
            }
        }
    }
    std::vector<int> modes = doc.get_ints("init.modes", {1});
    if (static_cast<int>(modes.size()) > naxes)
        throw ConfigError(doc.where("init.modes") + ": at most " + std::to_string(naxes) +
                          " value(s)");
    cfg.init.modes[0] = modes[0];
    cfg.init.modes[1] = naxes == 2 ? (modes.size() == 2 ? modes[1] : modes[0]) : 1;

    cfg.t_end = doc.get_double("run.t_end", 20.0);
    cfg.monitor_every = doc.get_double("run.monitor_every", 0.5);
    cfg.qlist = doc.get_doubles("run.q_list", {1.0, 2.0, 4.0});
    cfg.out_dir = doc.get_string("run.out_dir", "out");
    cfg.window_split = doc.get_double("run.window_split", 0.5);

    cfg.n_list = doc.get_doubles("study.n_list", {1.0, 4.0, 16.0, 64.0});
    cfg.t_eval = doc.get_double("study.t_eval", 1.0);
    cfg.p_list = doc.get_doubles("study.p_list", {1.2, 1.4, 1.45});
    cfg.mesh_cells = doc.get_ints("study.mesh_cells", {64, 128, 256});
    const std::string mode = doc.get_string("study.mesh_mode", "full");
    if (mode == "full") cfg.mesh_mode = MeshMode::full_scheme;
    else if (mode == "elliptic") cfg.mesh_mode = MeshMode::elliptic_manufactured;
    else
        throw ConfigError(doc.where("study.mesh_mode") +
                          ": expected 'full' or 'elliptic', got '" + mode + "'");
    cfg.mesh_dt_h2 = doc.get_bool("study.dt_h2", true);

    doc.finish();

    // Validation messages start with their key path; attach the source
    // line when the key appeared in the document.
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        if (colon != std::string::npos) {
            const std::string key = msg.substr(0, colon);
            const int line = doc.line_of(key);
            if (line > 0)
                throw ConfigError(msg + " [line " + std::to_string(line) + "]");
            if (line == 0) throw ConfigError(msg + " [override]");
        }
        throw;
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

namespace {

std::string join_doubles(const double* v, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += format_shortest(v[i]);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    return join_doubles(v.data(), static_cast<int>(v.size()));
}

} // namespace

std::string render_config(const RunConfig& cfg) {
    const int naxes = cfg.grid.naxes();
    std::ostringstream os;
    os << "grid.kind = " << to_string(cfg.grid.kind) << '\n';
    os << "grid.cells = " << cfg.grid.cells[0];
    if (naxes == 2) os << ' ' << cfg.grid.cells[1];
    os << '\n';
    os << "grid.extent = " << join_doubles(cfg.grid.extent.data(), naxes) << '\n';
    os << "grid.dim_n = " << cfg.grid.dim_n << '\n';
    os << "model.p = " << format_shortest(cfg.model.limiter.p) << '\n';
    os << "model.chi = " << format_shortest(cfg.model.chi) << '\n';
    os << "model.mu = " << format_shortest(cfg.model.mu) << '\n';
    os << "model.n_reg = " << format_shortest(cfg.model.limiter.n_reg) << '\n';
    os << "model.grad_floor = " << format_shortest(cfg.model.limiter.grad_floor) << '\n';
    os << "elliptic.rel_tol = " << format_shortest(cfg.model.elliptic.rel_tol) << '\n';
    os << "elliptic.max_iter = " << cfg.model.elliptic.max_iter << '\n';
    os << "dt.max = " << format_shortest(cfg.dt.dt_max) << '\n';
    os << "dt.safety = " << format_shortest(cfg.dt.safety) << '\n';
    os << "dt.min = " << format_shortest(cfg.dt.dt_min) << '\n';
    os << "dt.blowup_threshold = " << format_shortest(cfg.dt.blowup_threshold) << '\n';
    os << "init.kind = " << to_string(cfg.init.kind) << '\n';
    os << "init.amplitude = " << format_shortest(cfg.init.amplitude) << '\n';
    if (std::isnan(cfg.init.center[0]))
        os << "init.center = auto\n";
    else
        os << "init.center = " << join_doubles(cfg.init.center.data(), naxes) << '\n';
    os << "init.sigma = " << format_shortest(cfg.init.sigma) << '\n';
    os << "init.base = " << format_shortest(cfg.init.base) << '\n';
    os << "init.modes = " << cfg.init.modes[0];
    if (naxes == 2) os << ' ' << cfg.init.modes[1];
    os << '\n';
    os << "run.t_end = " << format_shortest(cfg.t_end) << '\n';
    os << "run.monitor_every = " << format_shortest(cfg.monitor_every) << '\n';
    os << "run.q_list = " << join_doubles(cfg.qlist) << '\n';
    os << "run.out_dir = " << cfg.out_dir << '\n';
    os << "run.window_split = " << format_shortest(cfg.window_split) << '\n';
    os << "study.n_list = " << join_doubles(cfg.n_list) << '\n';
    os << "study.t_eval = " << format_shortest(cfg.t_eval) << '\n';
    os << "study.p_list = " << join_doubles(cfg.p_list) << '\n';
    os << "study.mesh_cells =";
    for (int c : cfg.mesh_cells) os << ' ' << c;
    os << '\n';
    os << "study.mesh_mode = "
       << (cfg.mesh_mode == MeshMode::full_scheme ? "full" : "elliptic") << '\n';
    os << "study.dt_h2 = " << (cfg.mesh_dt_h2 ? "true" : "false") << '\n';
    return os.str();
}

} // namespace chemoflux
