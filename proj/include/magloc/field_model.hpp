#pragma once

#include <array>
#include <vector>

#include "magloc/geometry.hpp"

namespace magloc {

// Frame conventions used throughout:
//   wire frame (G):    x along the conductors, z vertical up, conductors at
//                      z = 0. The field of x-parallel wires has no x component
//                      in this frame.
//   vehicle frame (L): body frame of the sensor rig; all magnetometers share
//                      its orientation. Attitude::rotation() maps vehicle to
//                      wire frame.
// All field values are tesla, all positions meters, currents amperes.

inline constexpr double k_mu0 = 4.0e-7 * M_PI;  // T*m/A

/// I * mu0 / (2*pi), the per-wire field prefactor (tesla * meter).
inline constexpr double wire_prefactor(double current) { return current * 2.0e-7; }

/// Evaluation closer than this to a conductor axis is rejected.
inline constexpr double k_singularity_radius = 1e-3;  // m

/// One infinite straight conductor along the wire-frame x axis.
/// Current is signed: positive flows along +x.
struct Conductor {
    double offset_y = 0.0;  // m
    double offset_z = 0.0;  // m
    double current = 0.0;   // A
};

struct ConductorLayout {
    std::vector<Conductor> conductors;

    /// Canonical pair at (-y0, 0) and (+y0, 0) carrying the same current.
    static ConductorLayout two_wire(double y0, double current);

    void validate() const;  // at least one conductor

    /// True when the first two conductors form a symmetric equal-current pair
    /// at z = 0, which is what the closed-form solver requires.
    bool is_canonical_pair() const;
    double pair_half_spacing() const;  // y0 of the canonical pair
    double pair_prefactor() const;     // C of the canonical pair
    double pair_separation() const;    // distance between the first two wires
};

/// Closed-form flux density of the symmetric two-wire pair at wire-frame
/// (y, z). Returned in the wire frame; the x component is exactly zero.
Vec3 field_two_wire(double y, double z, double y0, double current);

/// Superposition of single-wire terms over an arbitrary layout, evaluated at
/// a wire-frame point. Reduces to field_two_wire for the canonical pair.
Vec3 field_multi_wire(const Vec3& point, const ConductorLayout& layout);

/// Eq-of-motion between frames: measurement in the vehicle frame ->
/// field vector in the wire frame.
Vec3 to_global(const Vec3& measurement, const Attitude& attitude);

/// Inverse of to_global.
Vec3 to_vehicle(const Vec3& field_global, const Attitude& attitude);

/// Fixed positions of the four magnetometers in the vehicle frame.
struct SensorRig {
    std::array<Vec3, 4> sensor_positions;

    /// Checks pairwise-distinct positions and a non-degenerate polygon of the
    /// x-z projections.
    void validate() const;
};

}  // namespace magloc
