#include "chemoflux/grid.hpp"

#include "chemoflux/errors.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace chemoflux {

std::string to_string(GridKind kind) {
    switch (kind) {
        case GridKind::cartesian1d: return "cartesian1d";
        case GridKind::cartesian2d: return "cartesian2d";
        case GridKind::radial: return "radial";
    }
    return "?";
}

GridKind grid_kind_from_string(const std::string& s) {
    if (s == "cartesian1d") return GridKind::cartesian1d;
    if (s == "cartesian2d") return GridKind::cartesian2d;
    if (s == "radial") return GridKind::radial;
    throw ConfigError("unknown grid kind '" + s +
                      "' (expected cartesian1d, cartesian2d or radial)");
}

void GridSpec::validate() const {
    for (int a = 0; a < naxes(); ++a) {
        if (cells[a] < 4)
            throw ConfigError("grid.cells: at least 4 cells per axis required");
        if (!(extent[a] > 0.0) || !std::isfinite(extent[a]))
            throw ConfigError("grid.extent: extents must be positive and finite");
    }
    if (kind == GridKind::radial && dim_n < 2)
        throw ConfigError("grid.dim_n: radial grids require ambient dimension >= 2");
    if (kind == GridKind::cartesian1d && dim_n != 1)
        throw ConfigError("grid.dim_n: cartesian1d forces dim_n = 1");
    if (kind == GridKind::cartesian2d && dim_n != 2)
        throw ConfigError("grid.dim_n: cartesian2d forces dim_n = 2");
}

double unit_sphere_area(int dim_n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim_n) / std::tgamma(0.5 * dim_n);
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t spec_tag(const GridSpec& s) {
    std::uint64_t h = 1469598103934665603ull;
    int k = static_cast<int>(s.kind);
    h = fnv1a(&k, sizeof k, h);
    h = fnv1a(s.cells.data(), sizeof s.cells, h);
    h = fnv1a(s.extent.data(), sizeof s.extent, h);
    h = fnv1a(&s.dim_n, sizeof s.dim_n, h);
    return h;
}

} // namespace

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    nx_ = spec_.cells[0];
    ny_ = spec_.naxes() == 2 ? spec_.cells[1] : 1;
    h_[0] = spec_.extent[0] / nx_;
    h_[1] = spec_.naxes() == 2 ? spec_.extent[1] / ny_ : 0.0;
    tag_ = spec_tag(spec_);

    cell_volume_.resize(static_cast<std::size_t>(nx_) * ny_);
    switch (spec_.kind) {
        case GridKind::cartesian1d: {
            const double vol = h_[0];
            for (auto& v : cell_volume_) v = vol;
            face_area_[0].assign(nx_ + 1, 1.0);
            total_volume_ = spec_.extent[0];
            break;
        }
        case GridKind::cartesian2d: {
            const double vol = h_[0] * h_[1];
            for (auto& v : cell_volume_) v = vol;
            face_area_[0].assign(static_cast<std::size_t>(nx_ + 1) * ny_, h_[1]);
            face_area_[1].assign(static_cast<std::size_t>(nx_) * (ny_ + 1), h_[0]);
            total_volume_ = spec_.extent[0] * spec_.extent[1];
            break;
        }
        case GridKind::radial: {
            // Exact shell volumes omega (r_{i+1}^N - r_i^N)/N so the sum
            // telescopes to the analytic ball volume.
            const int N = spec_.dim_n;
            const double omega = unit_sphere_area(N);
            face_area_[0].resize(nx_ + 1);
            for (int f = 0; f <= nx_; ++f) {
                const double r = f * h_[0];
                face_area_[0][f] = omega * std::pow(r, N - 1);
            }
            for (int i = 0; i < nx_; ++i) {
                const double r0 = i * h_[0], r1 = (i + 1) * h_[0];
                cell_volume_[i] = omega * (std::pow(r1, N) - std::pow(r0, N)) / N;
            }
            total_volume_ = omega * std::pow(spec_.extent[0], N) / N;
            break;
        }
    }
}

Grid make_grid(const GridSpec& spec) { return Grid(spec); }

ScalarField make_field(const Grid& g, double fill) {
    ScalarField f;
    f.values.assign(g.num_cells(), fill);
    f.grid_tag = g.tag();
    return f;
}

FaceVectorField make_face_field(const Grid& g) {
    FaceVectorField f;
    f.axis[0].assign(g.num_faces(0), 0.0);
    if (g.naxes() == 2) f.axis[1].assign(g.num_faces(1), 0.0);
    f.grid_tag = g.tag();
    return f;
}

void require_same_grid(const ScalarField& f, const Grid& g) {
    if (f.grid_tag != g.tag() || f.size() != g.num_cells())
        throw GridMismatch("scalar field does not belong to this grid");
}

void require_same_grid(const FaceVectorField& f, const Grid& g) {
    if (f.grid_tag != g.tag())
        throw GridMismatch("face field does not belong to this grid");
}

void require_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw NonFiniteError("non-finite value in scalar field");
}

namespace {

// Pairwise summation over [lo, hi): deterministic and accurate to
// O(eps log n) for the long reductions the invariants depend on.
template <typename F>
double pairwise_sum(int lo, int hi, const F& term) {
    if (hi - lo <= 32) {
        double s = 0.0;
        for (int i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const int mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

} // namespace

double integrate(const ScalarField& f, const Grid& g) {
    require_same_grid(f, g);
    double s = pairwise_sum(0, g.num_cells(), [&](int i) {
        return f.values[i] * g.cell_volume(i);
    });
    if (!std::isfinite(s)) throw NonFiniteError("non-finite value in integrate");
    return s;
}

double lq_norm(const ScalarField& f, const Grid& g, double q) {
    require_same_grid(f, g);
    if (!(q >= 1.0)) throw ConfigError("lq_norm: q >= 1 required");
    double s = pairwise_sum(0, g.num_cells(), [&](int i) {
        return std::pow(std::abs(f.values[i]), q) * g.cell_volume(i);
    });
    if (!std::isfinite(s)) throw NonFiniteError("non-finite value in lq_norm");
    return std::pow(s, 1.0 / q);
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) {
        if (!std::isfinite(v)) throw NonFiniteError("non-finite value in linf_norm");
        m = std::max(m, std::abs(v));
    }
    return m;
}

double dot_volume(const ScalarField& x, const ScalarField& y, const Grid& g) {
    require_same_grid(x, g);
    require_same_grid(y, g);
    return pairwise_sum(0, g.num_cells(), [&](int i) {
        return x.values[i] * y.values[i] * g.cell_volume(i);
    });
}

} // namespace chemoflux
