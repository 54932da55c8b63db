#pragma once

#include <string>
#include <vector>

#include "magloc/simulator.hpp"

namespace magloc {

// Scenario configs are JSON. Field values in the noise block are microtesla
// for readability (sigma_uT, earth_field_uT, motor_sigma_uT); trajectory
// angles are degrees (yaw_deg, pitch_deg, roll_deg). Everything else is SI:
// meters, amperes, hertz, seconds. Log files are always tesla.

struct Scenario {
    std::string name;
    ConductorLayout layout;
    SensorRig rig;
    Trajectory trajectory;
    NoiseModel noise;
    SamplingConfig sampling;
    FieldGenerator generator = FieldGenerator::closed_form;
    double segment_half_length = 1e4;
    int segment_steps = 4000;
};

std::vector<std::string> preset_names();

/// Built-in scenarios: `lab-2wire` (symmetric pair, 0.2 m half spacing,
/// 31 A, 50 Hz at 500 Hz sampling), `lab-3wire` (adds the return conductor
/// 5 m across and 1.5 m below), `noisy-motor` (one sensor with 20x broadband
/// noise).
Scenario preset(const std::string& name);

Scenario load_scenario_file(const std::string& path);

/// Resolves either a preset name or a path to a JSON scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

void save_scenario_file(const Scenario& scenario, const std::string& path);

}  // namespace magloc
