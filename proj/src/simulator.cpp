#include "magloc/simulator.hpp"

#include <cmath>
#include <random>

#include "magloc/biot_savart.hpp"
#include "magloc/errors.hpp"

namespace magloc {

void Trajectory::validate() const {
    if (waypoints.empty()) throw ConfigError("trajectory has no waypoints");
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        if (!(waypoints[i].t > waypoints[i - 1].t))
            throw ConfigError("trajectory timestamps must be strictly increasing");
}

namespace {

std::pair<std::size_t, double> locate(const std::vector<Waypoint>& wp, double t) {
    if (t <= wp.front().t) return {0, 0.0};
    if (t >= wp.back().t) return {wp.size() - 1, 0.0};
    std::size_t i = 0;
    while (i + 1 < wp.size() && wp[i + 1].t <= t) ++i;
    if (i + 1 >= wp.size()) return {i, 0.0};
    const double span = wp[i + 1].t - wp[i].t;
    return {i, (t - wp[i].t) / span};
}

}  // namespace

Vec3 Trajectory::position_at(double t) const {
    const auto [i, f] = locate(waypoints, t);
    if (mode == Interpolation::hold || f == 0.0 || i + 1 >= waypoints.size())
        return waypoints[i].position;
    return waypoints[i].position * (1.0 - f) + waypoints[i + 1].position * f;
}

Attitude Trajectory::attitude_at(double t) const {
    const auto [i, f] = locate(waypoints, t);
    if (mode == Interpolation::hold || f == 0.0 || i + 1 >= waypoints.size())
        return waypoints[i].attitude;
    const Attitude& a = waypoints[i].attitude;
    const Attitude& b = waypoints[i + 1].attitude;
    return {a.yaw + f * wrap_angle(b.yaw - a.yaw),
            a.pitch + f * wrap_angle(b.pitch - a.pitch),
            a.roll + f * wrap_angle(b.roll - a.roll)};
}

SimulationOutput simulate(const Trajectory& trajectory, const SensorRig& rig,
                          const ConductorLayout& layout, const NoiseModel& noise,
                          const SamplingConfig& sampling, FieldGenerator generator,
                          double segment_half_length, int segment_steps) {
    trajectory.validate();
    rig.validate();
    layout.validate();
    if (!(sampling.rate > 2.0 * sampling.frequency))
        throw ConfigError("sampling rate violates the Nyquist bound for the line frequency");

    const SegmentQuadrature quad{segment_half_length, segment_steps};
    auto field_at = [&](const Vec3& p) {
        if (generator == FieldGenerator::segment) return layout_segment_field(p, layout, quad);
        return field_multi_wire(p, layout);
    };

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double dt = 1.0 / sampling.rate;
    const double t0 = trajectory.start_time();
    const std::size_t count =
        static_cast<std::size_t>(std::floor((trajectory.end_time() - t0) / dt)) + 1;

    SimulationOutput out;
    out.raw.reserve(count);
    out.truth.reserve(count);
    const double omega = 2.0 * M_PI * sampling.frequency;

    for (std::size_t k = 0; k < count; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        const Vec3 pos = trajectory.position_at(t);
        const Attitude att = trajectory.attitude_at(t);
        const Mat3 rot = att.rotation();
        const Mat3 rot_t = rot.transposed();
        const Vec3 earth_vehicle = rot_t * noise.earth_field;
        const double carrier = std::cos(omega * t + sampling.ac_phase);

        RawSample row;
        row.t = t;
        for (int s = 0; s < 4; ++s) {
            const Vec3 world = pos + rot * rig.sensor_positions[s];
            const Vec3 b_vehicle = rot_t * field_at(world);
            const double axes[3] = {b_vehicle.x, b_vehicle.y, b_vehicle.z};
            const double earth[3] = {earth_vehicle.x, earth_vehicle.y, earth_vehicle.z};
            const double sig[3] = {noise.sigma.x, noise.sigma.y, noise.sigma.z};
            for (int a = 0; a < 3; ++a) {
                double v = earth[a] + axes[a] * carrier;
                double sd = sig[a];
                if (s == noise.motor_sensor) sd = std::hypot(sd, noise.motor_sigma);
                if (sd > 0.0) v += sd * gauss(rng);
                row.b[s * 3 + a] = v;
            }
        }
        out.raw.push_back(row);
        out.truth.push_back({t, pos.y, pos.z, att.yaw, att.pitch, att.roll});
    }
    return out;
}

}  // namespace magloc
