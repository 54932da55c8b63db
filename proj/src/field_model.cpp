#include "magloc/field_model.hpp"

#include <cmath>

#include "magloc/errors.hpp"

namespace magloc {

ConductorLayout ConductorLayout::two_wire(double y0, double current) {
    ConductorLayout layout;
    layout.conductors = {{-y0, 0.0, current}, {+y0, 0.0, current}};
    return layout;
}

void ConductorLayout::validate() const {
    if (conductors.empty()) throw ConfigError("layout has no conductors");
    for (const auto& c : conductors)
        if (!std::isfinite(c.offset_y) || !std::isfinite(c.offset_z) || !std::isfinite(c.current))
            throw ConfigError("layout has non-finite conductor parameters");
}

bool ConductorLayout::is_canonical_pair() const {
    if (conductors.size() < 2) return false;
    const auto& a = conductors[0];
    const auto& b = conductors[1];
    const double eps = 1e-12;
    return std::abs(a.offset_y + b.offset_y) < eps && std::abs(a.offset_z) < eps &&
           std::abs(b.offset_z) < eps && std::abs(a.current - b.current) < eps &&
           std::abs(a.offset_y) > eps;
}

double ConductorLayout::pair_half_spacing() const {
    if (!is_canonical_pair()) throw ConfigError("layout is not a canonical two-wire pair");
    return std::abs(conductors[0].offset_y);
}

double ConductorLayout::pair_prefactor() const {
    if (!is_canonical_pair()) throw ConfigError("layout is not a canonical two-wire pair");
    return wire_prefactor(conductors[0].current);
}

double ConductorLayout::pair_separation() const {
    if (conductors.size() < 2) throw ConfigError("layout needs two conductors for a pair");
    return std::abs(conductors[1].offset_y - conductors[0].offset_y);
}

namespace {

void check_clearance(double dy, double dz) {
    if (dy * dy + dz * dz < k_singularity_radius * k_singularity_radius)
        throw SingularPointError("field evaluation point lies on a conductor");
}

}  // namespace

Vec3 field_two_wire(double y, double z, double y0, double current) {
    const double c = wire_prefactor(current);
    const double dy_p = y + y0;
    const double dy_m = y - y0;
    check_clearance(dy_p, z);
    check_clearance(dy_m, z);
    const double r2_p = z * z + dy_p * dy_p;
    const double r2_m = z * z + dy_m * dy_m;
    return {0.0,
            c * (-z / r2_p - z / r2_m),
            c * (dy_p / r2_p + dy_m / r2_m)};
}

Vec3 field_multi_wire(const Vec3& point, const ConductorLayout& layout) {
    layout.validate();
    Vec3 b;
    for (const auto& wire : layout.conductors) {
        const double dy = point.y - wire.offset_y;
        const double dz = point.z - wire.offset_z;
        check_clearance(dy, dz);
        const double r2 = dy * dy + dz * dz;
        const double c = wire_prefactor(wire.current);
        b.y += c * (-dz / r2);
        b.z += c * (dy / r2);
    }
    return b;
}

Vec3 to_global(const Vec3& measurement, const Attitude& attitude) {
    return attitude.rotation() * measurement;
}

Vec3 to_vehicle(const Vec3& field_global, const Attitude& attitude) {
    return attitude.rotation().transposed() * field_global;
}

void SensorRig::validate() const {
    for (std::size_t i = 0; i < sensor_positions.size(); ++i)
        for (std::size_t j = i + 1; j < sensor_positions.size(); ++j)
            if ((sensor_positions[i] - sensor_positions[j]).norm() < 1e-9)
                throw ConfigError("rig sensors are not pairwise distinct");

    // Non-degenerate polygon of the x-z projections: some triple must span a
    // triangle with non-negligible area.
    double best = 0.0;
    for (std::size_t i = 0; i < sensor_positions.size(); ++i)
        for (std::size_t j = i + 1; j < sensor_positions.size(); ++j)
            for (std::size_t k = j + 1; k < sensor_positions.size(); ++k) {
                const double ax = sensor_positions[j].x - sensor_positions[i].x;
                const double az = sensor_positions[j].z - sensor_positions[i].z;
                const double bx = sensor_positions[k].x - sensor_positions[i].x;
                const double bz = sensor_positions[k].z - sensor_positions[i].z;
                best = std::max(best, std::abs(ax * bz - az * bx));
            }
    if (best < 1e-8) throw ConfigError("rig x-z projections are collinear");
}

}  // namespace magloc
