#pragma once

#include <array>
#include <utility>
#include <vector>

#include "magloc/field_model.hpp"
#include "magloc/geometry.hpp"
#include "magloc/signal_proc.hpp"

namespace magloc {

struct AttitudeEstimate {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;         // always 0, not observable from this field
    double consistency = 0.0;  // |pitch difference| across the sensor pair, rad

    Attitude attitude() const { return {yaw, pitch, roll}; }
};

/// One of the up-to-four wire-frame positions compatible with a single
/// sensor's energy and z component.
struct PositionCandidate {
    double y = 0.0;
    double z = 0.0;
    int y_root = 0;  // 1 or 2
    int z_sign = 0;  // +1 or -1
};

struct PoseEstimate {
    double y = 0.0;  // rig origin, wire frame, m
    double z = 0.0;
    AttitudeEstimate attitude;
    std::array<Vec3, 4> sensor_positions{};  // wire frame, x set to 0
    double residual = 0.0;                   // selection criterion value
    double timestamp = 0.0;
};

struct AnalyticConfig {
    double reading_floor = 1e-9;        // T, sensors below it are unusable
    double pair_threshold = 1e-3;       // cross norm fraction for yaw pairs
    double denominator_floor = 1e-12;   // T, pitch denominator
    double pitch_z_floor = 1e-7;        // T, preferred |Bz| for the pitch pair
    double candidate_tolerance = 1e-6;  // relative Bz reproduction for candidates
    double geometry_tolerance = 0.25;   // m, pairwise-distance pruning
    double smoothing_weight = 1.0;      // q, per meter of pose jump
    double ambiguity_ratio = 0.01;      // competing solutions within 1% tie
    // Local refinement of the winning combination against the selection
    // criterion; a no-op on exact data, it recovers the efficiency the
    // closed-form branch structure gives away under noise.
    bool polish = true;
};

/// Yaw of the vehicle frame from two vehicle-frame phasor vectors. The
/// result is defined modulo pi; solve_pose scores both candidates. Throws
/// DegeneratePairError when the vectors are near parallel.
double estimate_yaw(const Vec3& b_l, const Vec3& b_n, double pair_threshold = 1e-3);

/// Pitch from one vehicle-frame phasor vector and the yaw. Result in
/// (-pi/2, pi/2). Throws DegenerateDenominatorError when the z component
/// vanishes.
double estimate_pitch(const Vec3& b_m, double yaw, double denominator_floor = 1e-12);

/// The two z^2 branches compatible with field energy P^2 at lateral offset y.
/// Throws NegativeRadicandError when the chosen branch has no real value.
double z_squared(double y, double p, int sign, double y0, double c);

/// The two real lateral-offset roots for a measured (Bz, P).
/// Throws InvalidEnergyError when P^2 < Bz^2.
std::pair<double, double> y_candidates(double b_z, double p, double y0, double c);

/// All wire-frame positions reproducing the measured energy and z component
/// of one wire-frame reading; up to four.
std::vector<PositionCandidate> enumerate_candidates(const Vec3& b_global, double y0, double c,
                                                    double tolerance = 1e-6);

/// Full closed-form pose recovery: yaw/pitch from the best-conditioned sensor
/// pair, per-sensor candidate enumeration, and selection of the rigid-body
/// consistent combination minimizing the measurement-mismatch criterion
/// (optionally smoothed against the previous pose).
PoseEstimate solve_pose(const PhasorSet& readings, const SensorRig& rig,
                        const ConductorLayout& layout,
                        const PoseEstimate* previous = nullptr,
                        const AnalyticConfig& config = {});

}  // namespace magloc
