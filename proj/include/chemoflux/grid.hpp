#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace chemoflux {

enum class GridKind { cartesian1d, cartesian2d, radial };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

/// Description of the discrete domain. Cartesian grids cover a unit-like
/// box; the radial kind covers a ball of radius extent[0] in ambient
/// dimension dim_n, resolved along r only.
struct GridSpec {
    GridKind kind = GridKind::cartesian2d;
    std::array<int, 2> cells = {128, 128};  // cells[1] unused for 1-axis kinds
    std::array<double, 2> extent = {1.0, 1.0};
    int dim_n = 2;  // ambient dimension; enters the r^{N-1} weight for radial

    int naxes() const { return kind == GridKind::cartesian2d ? 2 : 1; }
    void validate() const;  // throws ConfigError
    bool operator==(const GridSpec&) const = default;
};

/// Immutable finite-volume mesh: spacings, exact cell volumes and face
/// areas, with zero-area/zero-flux faces realizing the Neumann boundary.
class Grid {
  public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    GridKind kind() const { return spec_.kind; }
    int naxes() const { return spec_.naxes(); }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int num_cells() const { return nx_ * ny_; }
    double h(int axis) const { return h_[axis]; }
    double min_h() const { return naxes() == 2 ? std::min(h_[0], h_[1]) : h_[0]; }
    double total_volume() const { return total_volume_; }
    std::uint64_t tag() const { return tag_; }

    double cell_volume(int c) const { return cell_volume_[c]; }
    const std::vector<double>& cell_volumes() const { return cell_volume_; }

    /// Number of faces normal to `axis` (includes boundary faces).
    int num_faces(int axis) const {
        if (axis == 0) return (nx_ + 1) * ny_;
        return nx_ * (ny_ + 1);
    }
    double face_area(int axis, int f) const { return face_area_[axis][f]; }

    int cell_index(int i, int j = 0) const { return j * nx_ + i; }
    int xface_index(int i, int j = 0) const { return j * (nx_ + 1) + i; }
    int yface_index(int i, int j) const { return j * nx_ + i; }

    /// Coordinate of cell center along `axis` (radius for radial grids).
    double cell_center(int axis, int idx) const { return (idx + 0.5) * h_[axis]; }

  private:
    GridSpec spec_;
    int nx_ = 0, ny_ = 1;
    std::array<double, 2> h_ = {0.0, 0.0};
    std::vector<double> cell_volume_;
    std::array<std::vector<double>, 2> face_area_;
    double total_volume_ = 0.0;
    std::uint64_t tag_ = 0;
};

Grid make_grid(const GridSpec& spec);

/// Surface area of the unit sphere S^{N-1}.
double unit_sphere_area(int dim_n);

/// Cell-centered values of one scalar unknown. Carries the tag of the grid
/// it was built on so mixed-grid use is caught at call time.
struct ScalarField {
    std::vector<double> values;
    std::uint64_t grid_tag = 0;

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    int size() const { return static_cast<int>(values.size()); }
};

ScalarField make_field(const Grid& g, double fill = 0.0);

/// Face-normal components, one entry per face per axis. Boundary entries
/// are kept identically zero (homogeneous Neumann / zero flux). The same
/// container holds per-face scalars such as gradient magnitudes.
struct FaceVectorField {
    std::array<std::vector<double>, 2> axis;
    std::uint64_t grid_tag = 0;
};
using FaceScalarField = FaceVectorField;

FaceVectorField make_face_field(const Grid& g);

void require_same_grid(const ScalarField& f, const Grid& g);
void require_same_grid(const FaceVectorField& f, const Grid& g);
void require_finite(const ScalarField& f);

/// Discrete integral  sum_i f_i vol_i  (pairwise summation).
double integrate(const ScalarField& f, const Grid& g);

/// (sum_i |f_i|^q vol_i)^{1/q}, q >= 1.
double lq_norm(const ScalarField& f, const Grid& g, double q);

/// max_i |f_i|.
double linf_norm(const ScalarField& f);

/// Volume-weighted inner product sum_i x_i y_i vol_i.
double dot_volume(const ScalarField& x, const ScalarField& y, const Grid& g);

} // namespace chemoflux
