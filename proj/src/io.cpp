#include "chemoflux/io.hpp"

#include "chemoflux/errors.hpp"
#include "chemoflux/numfmt.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace chemoflux {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

void to_little_endian(double v, unsigned char out[8]) {
    std::memcpy(out, &v, 8);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(out, out + 8);
}

double from_little_endian(const unsigned char in[8]) {
    unsigned char buf[8];
    std::memcpy(buf, in, 8);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(buf, buf + 8);
    double v;
    std::memcpy(&v, buf, 8);
    return v;
}

std::string monitor_header(const std::vector<std::pair<double, double>>& lq) {
    std::string h = "t,dt,mass,min_u,max_u";
    for (const auto& [q, n] : lq) h += ",l2q_" + format_shortest(q);
    h += ",grad_v_max,grad_energy_cum,elliptic_residual";
    return h;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_monitor_csv(const std::vector<MonitorRecord>& series,
                       const std::string& path) {
    std::ofstream out = open_out(path);
    const std::vector<std::pair<double, double>> lq0 =
        series.empty() ? std::vector<std::pair<double, double>>{} : series.front().lq;
    out << monitor_header(lq0) << '\n';
    for (const auto& r : series) {
        if (r.lq.size() != lq0.size())
            throw Error("monitor series has inconsistent q-lists");
        out << format_g17(r.t) << ',' << format_g17(r.dt) << ',' << format_g17(r.mass)
            << ',' << format_g17(r.min_u) << ',' << format_g17(r.max_u);
        for (const auto& [q, n] : r.lq) out << ',' << format_g17(n);
        out << ',' << format_g17(r.grad_v_max) << ',' << format_g17(r.grad_energy_cum)
            << ',' << format_g17(r.elliptic_residual) << '\n';
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<MonitorRecord> read_monitor_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty monitor CSV '" + path + "'");
    const std::vector<std::string> cols = split_csv(line);
    if (cols.size() < 8 || cols[0] != "t")
        throw Error("not a monitor CSV: '" + path + "'");
    std::vector<double> qs;
    for (const auto& c : cols)
        if (c.rfind("l2q_", 0) == 0) qs.push_back(parse_double(c.substr(4)));

    std::vector<MonitorRecord> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != cols.size())
            throw Error("monitor CSV row has wrong column count");
        MonitorRecord r;
        std::size_t k = 0;
        r.t = parse_double(f[k++]);
        r.dt = parse_double(f[k++]);
        r.mass = parse_double(f[k++]);
        r.min_u = parse_double(f[k++]);
        r.max_u = parse_double(f[k++]);
        for (double q : qs) r.lq.emplace_back(q, parse_double(f[k++]));
        r.grad_v_max = parse_double(f[k++]);
        r.grad_energy_cum = parse_double(f[k++]);
        r.elliptic_residual = parse_double(f[k++]);
        series.push_back(r);
    }
    return series;
}

void write_snapshot(const ScalarField& f, const Grid& g, const std::string& path) {
    require_same_grid(f, g);
    std::ofstream out = open_out(path);
    const GridSpec& s = g.spec();
    out << "CHEMOFLUX v1 " << to_string(s.kind);
    for (int a = 0; a < s.naxes(); ++a) out << ' ' << s.cells[a];
    for (int a = 0; a < s.naxes(); ++a) out << ' ' << format_shortest(s.extent[a]);
    out << ' ' << s.dim_n << '\n';
    std::vector<unsigned char> buf(static_cast<std::size_t>(f.size()) * 8);
    for (int c = 0; c < f.size(); ++c) to_little_endian(f.values[c], &buf[8 * c]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write failed for '" + path + "'");
}

std::pair<ScalarField, GridSpec> read_snapshot(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string header;
    if (!std::getline(in, header)) throw Error("snapshot '" + path + "': missing header");
    std::istringstream hs(header);
    std::string magic, version, kind;
    hs >> magic >> version >> kind;
    if (magic != "CHEMOFLUX" || version != "v1")
        throw Error("snapshot '" + path + "': bad magic '" + magic + " " + version + "'");
    GridSpec spec;
    spec.kind = grid_kind_from_string(kind);
    const int naxes = spec.kind == GridKind::cartesian2d ? 2 : 1;
    for (int a = 0; a < naxes; ++a)
        if (!(hs >> spec.cells[a])) throw Error("snapshot header: missing cell counts");
    if (naxes == 1) spec.cells[1] = 1;
    for (int a = 0; a < naxes; ++a) {
        std::string tok;
        if (!(hs >> tok)) throw Error("snapshot header: missing extents");
        spec.extent[a] = parse_double(tok);
    }
    if (naxes == 1) spec.extent[1] = 1.0;
    if (!(hs >> spec.dim_n)) throw Error("snapshot header: missing dimension");
    std::string extra;
    if (hs >> extra) throw Error("snapshot header: trailing tokens");
    spec.validate();

    const Grid g = make_grid(spec);
    const std::size_t n = static_cast<std::size_t>(g.num_cells());
    std::vector<unsigned char> buf(n * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
        throw Error("snapshot '" + path + "': truncated payload");
    char probe;
    if (in.read(&probe, 1) && in.gcount() == 1)
        throw Error("snapshot '" + path + "': payload longer than header declares");

    ScalarField f = make_field(g);
    for (std::size_t c = 0; c < n; ++c) f.values[c] = from_little_endian(&buf[8 * c]);
    return {std::move(f), spec};
}

void write_study_csv(const StudyResult& result, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# study = " << result.kind << '\n';
    out << "# verdict = " << result.verdict << '\n';
    out << "# config: " << result.config_stamp << '\n';
    for (std::size_t i = 0; i < result.columns.size(); ++i)
        out << (i ? "," : "") << result.columns[i];
    out << '\n';
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace chemoflux
