#ifndef LQGDIM_GRID_HPP
#define LQGDIM_GRID_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lqgdim {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Square lattice over the unit square [0,1]^2: n points per side,
/// point (i,j) at (origin.x + j*spacing, origin.y + i*spacing).
struct GridSpec {
    int n = 0;
    double spacing = 0.0;
    Point origin{0.0, 0.0};

    static GridSpec unit_square(int n);

    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    Point site(int i, int j) const {
        return {origin.x + j * spacing, origin.y + i * spacing};
    }
    bool operator==(const GridSpec&) const = default;
};

enum class FieldKind : std::uint8_t {
    whitenoise = 0,
    whitenoise_truncated = 1,
    dgff_zero_boundary = 2,
};

/// A scalar field sampled at the grid sites, row-major.
struct GridField {
    GridSpec spec;
    FieldKind kind = FieldKind::whitenoise;
    /// Finest resolved scale for whitenoise fields (variance log 1/t);
    /// unused for the dgff.
    double scale_t = 1.0;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.n + j]; }

    /// Bilinear interpolation at an arbitrary point; coordinates are
    /// clamped to the grid.
    double interpolate(Point p) const;
};

/// Binary dump: magic "LQGF", u32 n, f64 spacing, u8 kind, f64 scale_t,
/// then n^2 f64 values row-major, all little-endian.
void write_field(std::ostream& os, const GridField& field);
GridField read_field(std::istream& is);

} // namespace lqgdim

#endif
