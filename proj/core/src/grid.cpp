#include "lqgdim/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lqgdim {

GridSpec GridSpec::unit_square(int n) {
    if (n < 4) throw std::invalid_argument("GridSpec: n must be >= 4");
    GridSpec spec;
    spec.n = n;
    spec.spacing = 1.0 / (n - 1);
    spec.origin = {0.0, 0.0};
    return spec;
}

double GridField::interpolate(Point p) const {
    const int n = spec.n;
    double fx = (p.x - spec.origin.x) / spec.spacing;
    double fy = (p.y - spec.origin.y) / spec.spacing;
    fx = std::clamp(fx, 0.0, static_cast<double>(n - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(n - 1));
    const int j0 = std::min(static_cast<int>(fx), n - 2);
    const int i0 = std::min(static_cast<int>(fy), n - 2);
    const double tx = fx - j0;
    const double ty = fy - i0;
    return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0, j0 + 1) +
           (1 - tx) * ty * at(i0 + 1, j0) + tx * ty * at(i0 + 1, j0 + 1);
}

namespace {
static_assert(std::endian::native == std::endian::little,
              "field dump assumes a little-endian host");
}

void write_field(std::ostream& os, const GridField& field) {
    os.write("LQGF", 4);
    const std::uint32_t n = static_cast<std::uint32_t>(field.spec.n);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&field.spec.spacing), sizeof(double));
    const std::uint8_t kind = static_cast<std::uint8_t>(field.kind);
    os.write(reinterpret_cast<const char*>(&kind), sizeof kind);
    os.write(reinterpret_cast<const char*>(&field.scale_t), sizeof(double));
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

GridField read_field(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LQGF", 4) != 0)
        throw std::runtime_error("read_field: bad magic");
    std::uint32_t n = 0;
    double spacing = 0.0;
    std::uint8_t kind = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&spacing), sizeof spacing);
    is.read(reinterpret_cast<char*>(&kind), sizeof kind);
    double scale_t = 1.0;
    is.read(reinterpret_cast<char*>(&scale_t), sizeof scale_t);
    if (!is || n < 4 || kind > 2) throw std::runtime_error("read_field: bad header");
    GridField field;
    field.spec.n = static_cast<int>(n);
    field.spec.spacing = spacing;
    field.kind = static_cast<FieldKind>(kind);
    field.scale_t = scale_t;
    field.values.resize(static_cast<std::size_t>(n) * n);
    is.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_field: truncated payload");
    return field;
}

} // namespace lqgdim
