#pragma once

// Forward-model helpers shared by the solver tests: generate exact phasor
// readings for a known pose and layout.

#include <random>

#include "magloc/field_model.hpp"
#include "magloc/signal_proc.hpp"

namespace magloc::testing {

inline SensorRig test_rig() {
    SensorRig rig;
    rig.sensor_positions = {Vec3{0.18, 0.18, 0.04}, Vec3{-0.18, 0.18, -0.04},
                            Vec3{-0.18, -0.18, 0.04}, Vec3{0.18, -0.18, -0.04}};
    return rig;
}

inline PhasorSet make_readings(const SensorRig& rig, const ConductorLayout& layout, double y,
                               double z, const Attitude& att, double t = 0.0) {
    const Mat3 rot = att.rotation();
    const Mat3 rot_t = rot.transposed();
    PhasorSet out;
    for (int i = 0; i < 4; ++i) {
        const Vec3 world = Vec3{0.0, y, z} + rot * rig.sensor_positions[i];
        out[i].b = rot_t * field_multi_wire({0.0, world.y, world.z}, layout);
        out[i].timestamp = t;
    }
    return out;
}

struct RandomPose {
    double y, z, yaw, pitch;
};

inline RandomPose random_pose(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uy(-2.0, 2.0);
    std::uniform_real_distribution<double> uz(-2.0, -0.3);
    std::uniform_real_distribution<double> uyaw(-60.0 * M_PI / 180.0, 60.0 * M_PI / 180.0);
    std::uniform_real_distribution<double> upitch(-20.0 * M_PI / 180.0, 20.0 * M_PI / 180.0);
    // Stay off the symmetry plane, where the heading is ambiguous modulo pi.
    double y = uy(rng);
    while (std::abs(y) < 0.01) y = uy(rng);
    return {y, uz(rng), uyaw(rng), upitch(rng)};
}

}  // namespace magloc::testing
