#pragma once

#include <string>
#include <vector>

#include "magloc/signal_proc.hpp"
#include "magloc/simulator.hpp"

namespace magloc {

// CSV log formats. All field values are tesla, times seconds, positions
// meters, angles radians. Doubles are written with round-trip precision so a
// read-back is bit-exact.
//
//   raw:    t_s, s0x,s0y,s0z, s1x,s1y,s1z, s2x,s2y,s2z, s3x,s3y,s3z
//   phasor: t_s, 12 signed amplitudes (same column order)
//   truth:  t_s, y_m, z_m, yaw_rad, pitch_rad, roll_rad
//   pose:   t_s, y_m, z_m, yaw_rad, pitch_rad, residual, solver
//
// Failed solves appear in pose logs as rows with nan values ("gap rows").

struct PoseRow {
    double t = 0.0;
    double y = 0.0, z = 0.0;
    double yaw = 0.0, pitch = 0.0;
    double residual = 0.0;
    std::string solver;  // analytic | numeric2 | numeric3

    bool valid() const;
};

void write_raw_log(const std::string& path, const std::vector<RawSample>& rows);
std::vector<RawSample> read_raw_log(const std::string& path);

void write_truth_log(const std::string& path, const std::vector<TruthSample>& rows);
std::vector<TruthSample> read_truth_log(const std::string& path);

void write_phasor_log(const std::string& path, const std::vector<PhasorSet>& rows);
std::vector<PhasorSet> read_phasor_log(const std::string& path);

void write_pose_log(const std::string& path, const std::vector<PoseRow>& rows);
std::vector<PoseRow> read_pose_log(const std::string& path);

}  // namespace magloc
