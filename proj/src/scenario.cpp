#include "magloc/scenario.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "magloc/errors.hpp"

namespace magloc {

namespace {

using nlohmann::json;

constexpr double k_deg = M_PI / 180.0;

Scenario base_lab_scenario() {
    Scenario sc;
    sc.layout = ConductorLayout::two_wire(0.2, 31.0);
    sc.rig.sensor_positions = {Vec3{0.18, 0.18, 0.04}, Vec3{-0.18, 0.18, -0.04},
                               Vec3{-0.18, -0.18, 0.04}, Vec3{0.18, -0.18, -0.04}};
    sc.sampling = {50.0, 500.0, 0.0};
    sc.noise.sigma = {0.0, 0.0, 0.0};
    sc.noise.earth_field = {20e-6, 0.0, -43e-6};
    sc.noise.seed = 1;

    // A smooth 60 s figure sweep under the pair with gentle yaw and pitch
    // oscillations, sampled densely enough that linear interpolation between
    // waypoints stays far below the solver tolerances.
    sc.trajectory.mode = Interpolation::linear;
    for (double t = 0.0; t <= 60.0 + 1e-9; t += 0.25) {
        Waypoint wp;
        wp.t = t;
        wp.position = {0.0, -1.2 * std::cos(2.0 * M_PI * t / 60.0),
                       -1.0 + 0.3 * std::sin(2.0 * M_PI * t / 30.0)};
        wp.attitude = {0.5 * std::sin(2.0 * M_PI * t / 60.0 + 1.0),
                       0.15 * std::sin(2.0 * M_PI * t / 20.0), 0.0};
        sc.trajectory.waypoints.push_back(wp);
    }
    return sc;
}

}  // namespace

std::vector<std::string> preset_names() { return {"lab-2wire", "lab-3wire", "noisy-motor"}; }

Scenario preset(const std::string& name) {
    if (name == "lab-2wire") {
        Scenario sc = base_lab_scenario();
        sc.name = name;
        return sc;
    }
    if (name == "lab-3wire") {
        Scenario sc = base_lab_scenario();
        sc.name = name;
        // Return conductor: 5 m across from the first wire, 1.5 m lower,
        // carrying the combined feed back.
        sc.layout.conductors.push_back({-0.2 + 5.0, -1.5, -62.0});
        return sc;
    }
    if (name == "noisy-motor") {
        Scenario sc = base_lab_scenario();
        sc.name = name;
        sc.noise.sigma = {0.5e-6, 0.5e-6, 0.5e-6};
        sc.noise.motor_sigma = 10e-6;  // 20x the base level
        sc.noise.motor_sensor = 0;
        // Hover instead of sweeping so amplitude scatter reflects the noise
        // injection rather than the motion.
        sc.trajectory.mode = Interpolation::hold;
        sc.trajectory.waypoints = {{0.0, {0.0, 0.5, -1.0}, {0.2, 0.05, 0.0}},
                                   {30.0, {0.0, 0.5, -1.0}, {0.2, 0.05, 0.0}}};
        return sc;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

namespace {

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("scenario '" + path + "': " + e.what());
    }

    try {
        Scenario sc;
        sc.name = j.value("name", path);

        for (const auto& w : j.at("layout").at("wires"))
            sc.layout.conductors.push_back({w.at("offset_y").get<double>(),
                                            w.at("offset_z").get<double>(),
                                            w.at("current").get<double>()});
        sc.layout.validate();

        const auto& sensors = j.at("rig").at("sensors");
        if (sensors.size() != 4) throw ConfigError("rig needs exactly 4 sensors");
        for (int i = 0; i < 4; ++i) sc.rig.sensor_positions[i] = vec3_from(sensors[i]);
        sc.rig.validate();

        const auto& traj = j.at("trajectory");
        const std::string interp = traj.value("interpolation", "linear");
        if (interp == "linear")
            sc.trajectory.mode = Interpolation::linear;
        else if (interp == "hold")
            sc.trajectory.mode = Interpolation::hold;
        else
            throw ConfigError("unknown interpolation '" + interp + "'");
        for (const auto& w : traj.at("waypoints")) {
            Waypoint wp;
            wp.t = w.at("t").get<double>();
            wp.position = vec3_from(w.at("position"));
            wp.attitude = {w.value("yaw_deg", 0.0) * k_deg, w.value("pitch_deg", 0.0) * k_deg,
                           w.value("roll_deg", 0.0) * k_deg};
            sc.trajectory.waypoints.push_back(wp);
        }
        sc.trajectory.validate();

        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            if (n.contains("sigma_uT")) sc.noise.sigma = vec3_from(n.at("sigma_uT")) * 1e-6;
            if (n.contains("earth_field_uT"))
                sc.noise.earth_field = vec3_from(n.at("earth_field_uT")) * 1e-6;
            sc.noise.motor_sigma = n.value("motor_sigma_uT", 0.0) * 1e-6;
            sc.noise.motor_sensor = n.value("motor_sensor", -1);
            sc.noise.seed = n.value("seed", std::uint64_t{1});
        }
        if (j.contains("sampling")) {
            const auto& s = j.at("sampling");
            sc.sampling.frequency = s.value("frequency_hz", 50.0);
            sc.sampling.rate = s.value("rate_hz", 500.0);
            sc.sampling.ac_phase = s.value("ac_phase_rad", 0.0);
        }
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            const std::string model = g.value("model", "closed-form");
            if (model == "closed-form")
                sc.generator = FieldGenerator::closed_form;
            else if (model == "segment")
                sc.generator = FieldGenerator::segment;
            else
                throw ConfigError("unknown field generator '" + model + "'");
            sc.segment_half_length = g.value("half_length_m", 1e4);
            sc.segment_steps = g.value("steps", 4000);
        }
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError("scenario '" + path + "': " + e.what());
    }
}

Scenario resolve_scenario(const std::string& name_or_path) {
    for (const auto& p : preset_names())
        if (name_or_path == p) return preset(name_or_path);
    return load_scenario_file(name_or_path);
}

void save_scenario_file(const Scenario& sc, const std::string& path) {
    json j;
    j["name"] = sc.name;
    j["layout"]["wires"] = json::array();
    for (const auto& w : sc.layout.conductors)
        j["layout"]["wires"].push_back(
            {{"offset_y", w.offset_y}, {"offset_z", w.offset_z}, {"current", w.current}});
    j["rig"]["sensors"] = json::array();
    for (const auto& p : sc.rig.sensor_positions) j["rig"]["sensors"].push_back(vec3_to(p));
    j["trajectory"]["interpolation"] =
        sc.trajectory.mode == Interpolation::linear ? "linear" : "hold";
    j["trajectory"]["waypoints"] = json::array();
    for (const auto& w : sc.trajectory.waypoints)
        j["trajectory"]["waypoints"].push_back({{"t", w.t},
                                                {"position", vec3_to(w.position)},
                                                {"yaw_deg", w.attitude.yaw / k_deg},
                                                {"pitch_deg", w.attitude.pitch / k_deg},
                                                {"roll_deg", w.attitude.roll / k_deg}});
    j["noise"] = {{"sigma_uT", vec3_to(sc.noise.sigma * 1e6)},
                  {"earth_field_uT", vec3_to(sc.noise.earth_field * 1e6)},
                  {"motor_sigma_uT", sc.noise.motor_sigma * 1e6},
                  {"motor_sensor", sc.noise.motor_sensor},
                  {"seed", sc.noise.seed}};
    j["sampling"] = {{"frequency_hz", sc.sampling.frequency},
                     {"rate_hz", sc.sampling.rate},
                     {"ac_phase_rad", sc.sampling.ac_phase}};
    j["generator"] = {
        {"model", sc.generator == FieldGenerator::closed_form ? "closed-form" : "segment"},
        {"half_length_m", sc.segment_half_length},
        {"steps", sc.segment_steps}};

    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace magloc
