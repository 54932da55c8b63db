#pragma once

#include <cstdint>
#include <vector>

#include "magloc/field_model.hpp"
#include "magloc/geometry.hpp"
#include "magloc/signal_proc.hpp"

namespace magloc {

enum class Interpolation { linear, hold };

struct Waypoint {
    double t = 0.0;
    Vec3 position;  // wire frame, m
    Attitude attitude;
};

/// Scripted rig motion. Waypoint times must be strictly increasing; roll may
/// be non-zero to probe the roll-zero assumption of the solvers.
struct Trajectory {
    std::vector<Waypoint> waypoints;
    Interpolation mode = Interpolation::linear;

    void validate() const;
    double start_time() const { return waypoints.front().t; }
    double end_time() const { return waypoints.back().t; }
    Vec3 position_at(double t) const;
    Attitude attitude_at(double t) const;
};

struct NoiseModel {
    Vec3 sigma;                   // per-axis Gaussian, T
    Vec3 earth_field{20e-6, 0.0, -43e-6};  // DC offset, wire frame, T
    double motor_sigma = 0.0;     // extra broadband noise, T
    int motor_sensor = -1;        // sensor index it applies to, -1 = none
    std::uint64_t seed = 1;
};

struct SamplingConfig {
    double frequency = 50.0;   // Hz, line frequency
    double rate = 500.0;       // Hz, magnetometer sampling
    double ac_phase = 0.0;     // rad, shared phase of all conductors
};

enum class FieldGenerator { closed_form, segment };

struct TruthSample {
    double t = 0.0;
    double y = 0.0, z = 0.0;
    double yaw = 0.0, pitch = 0.0, roll = 0.0;
};

struct SimulationOutput {
    std::vector<RawSample> raw;
    std::vector<TruthSample> truth;
};

/// Generates the raw magnetometer log and the ground-truth pose log for a
/// scripted trajectory. Each sample is the rotated Earth field plus the
/// signed model amplitude times cos(2 pi f t + phase) plus Gaussian noise.
/// The segment generator swaps the closed-form field for the finite-segment
/// quadrature, which is slow and meant for short model-mismatch studies.
SimulationOutput simulate(const Trajectory& trajectory, const SensorRig& rig,
                          const ConductorLayout& layout, const NoiseModel& noise,
                          const SamplingConfig& sampling,
                          FieldGenerator generator = FieldGenerator::closed_form,
                          double segment_half_length = 1e4, int segment_steps = 4000);

}  // namespace magloc
