// magloc: simulate, extract, localize and evaluate magnetometer-based
// localization runs against parallel AC conductors.
//
// Exit codes: 0 success, 2 configuration error, 3 IO error, 4 numerical
// failure. Every flag can also be set through the environment with the
// MAGLOC_ prefix (e.g. MAGLOC_SCENARIO).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magloc/analytic_solver.hpp"
#include "magloc/errors.hpp"
#include "magloc/evaluate.hpp"
#include "magloc/logs.hpp"
#include "magloc/numeric_solver.hpp"
#include "magloc/scenario.hpp"
#include "magloc/signal_proc.hpp"
#include "magloc/simulator.hpp"

using namespace magloc;

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_config = 2;
constexpr int k_exit_io = 3;
constexpr int k_exit_numeric = 4;

struct CommonOptions {
    std::string scenario = "lab-2wire";
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    double frequency = 50.0;
    int window = 100;
    int hop = 50;
};

std::filesystem::path ensure_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");
    return p;
}

Scenario load(const CommonOptions& opt) {
    Scenario sc = resolve_scenario(opt.scenario);
    if (opt.seed) sc.noise.seed = *opt.seed;
    return sc;
}

int run_simulate(const CommonOptions& opt, double rate_override) {
    Scenario sc = load(opt);
    if (rate_override > 0.0) sc.sampling.rate = rate_override;
    const auto out = ensure_out_dir(opt.out_dir);
    const auto sim = simulate(sc.trajectory, sc.rig, sc.layout, sc.noise, sc.sampling,
                              sc.generator, sc.segment_half_length, sc.segment_steps);
    write_raw_log((out / "raw.csv").string(), sim.raw);
    write_truth_log((out / "truth.csv").string(), sim.truth);
    std::cout << "simulate: " << sim.raw.size() << " samples -> " << (out / "raw.csv").string()
              << "\n";
    return k_exit_ok;
}

int run_extract(const CommonOptions& opt, const std::string& raw_path, bool freq_given) {
    const auto out = ensure_out_dir(opt.out_dir);
    const std::string input =
        raw_path.empty() ? (out / "raw.csv").string() : raw_path;
    const auto rows = read_raw_log(input);
    if (rows.empty()) {
        write_phasor_log((out / "phasors.csv").string(), {});
        std::cerr << "extract: warning: empty raw log, wrote empty phasor log\n";
        return k_exit_ok;
    }
    ExtractionConfig cfg;
    // Line frequency defaults to the scenario's unless --freq was given.
    cfg.frequency = freq_given ? opt.frequency : load(opt).sampling.frequency;
    cfg.window_length = opt.window;
    cfg.hop = opt.hop;
    const auto result = extract_phasors(rows, cfg);
    write_phasor_log((out / "phasors.csv").string(), result.phasors);
    for (const auto& gap : result.gaps)
        std::cerr << "extract: gap at row " << gap.row_index << " (" << gap.t_before << " -> "
                  << gap.t_after << " s)\n";
    for (const auto& issue : result.issues)
        std::cerr << "extract: window at " << issue.time << " s skipped: " << issue.what << "\n";
    std::cout << "extract: " << result.phasors.size() << " phasor sets -> "
              << (out / "phasors.csv").string() << "\n";
    return k_exit_ok;
}

int run_localize(const CommonOptions& opt, const std::string& solver,
                 const std::string& phasor_path, const std::string& timing_path) {
    const auto out = ensure_out_dir(opt.out_dir);
    const std::string input = phasor_path.empty() ? (out / "phasors.csv").string() : phasor_path;
    const auto sets = read_phasor_log(input);
    Scenario sc = load(opt);

    ConductorLayout layout = sc.layout;
    if (solver == "numeric2" && layout.conductors.size() > 2)
        layout.conductors.resize(2);
    if (solver == "numeric3" && layout.conductors.size() < 3)
        throw ConfigError("numeric3 needs a third conductor in the scenario layout");
    ConductorLayout pair = sc.layout;
    pair.conductors.resize(2);

    std::vector<PoseRow> rows;
    std::vector<double> solve_ms;
    // Seed the estimate chain from the scenario's initial waypoint; the
    // current-direction mirror branch cannot be told apart from AC data
    // alone, so the deployment side comes from configuration.
    PoseEstimate previous;
    previous.y = sc.trajectory.waypoints.front().position.y;
    previous.z = sc.trajectory.waypoints.front().position.z;
    previous.attitude = {sc.trajectory.waypoints.front().attitude.yaw,
                         sc.trajectory.waypoints.front().attitude.pitch, 0.0, 0.0};
    SolverState state;
    std::size_t failures = 0;

    for (const auto& set : sets) {
        const auto t0 = std::chrono::steady_clock::now();
        PoseRow row;
        row.t = set[0].timestamp;
        row.solver = solver;
        try {
            if (solver == "analytic") {
                const PoseEstimate pose = solve_pose(set, sc.rig, pair, &previous);
                previous = pose;
                row.y = pose.y;
                row.z = pose.z;
                row.yaw = pose.attitude.yaw;
                row.pitch = pose.attitude.pitch;
                row.residual = pose.residual;
            } else {
                // Attitude from the closed-form stage; if it degenerates
                // (e.g. unmodeled conductors), carry the previous attitude.
                Attitude att;
                try {
                    const PoseEstimate att_pose = solve_pose(set, sc.rig, pair, &previous);
                    previous = att_pose;
                    att = att_pose.attitude.attitude();
                } catch (const NumericError&) {
                    att = previous.attitude.attitude();
                }
                const auto sol = solve_numeric(set, sc.rig, att, layout, state, {}, &previous);
                state = sol.state;
                row.y = sol.pose.y;
                row.z = sol.pose.z;
                row.yaw = sol.pose.attitude.yaw;
                row.pitch = sol.pose.attitude.pitch;
                row.residual = sol.pose.residual;
            }
        } catch (const NumericError& e) {
            ++failures;
            row.y = row.z = row.yaw = row.pitch = row.residual = std::nan("");
            std::cerr << "localize: t=" << row.t << " s failed: " << e.what() << "\n";
        }
        const auto t1 = std::chrono::steady_clock::now();
        solve_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        rows.push_back(std::move(row));
    }

    write_pose_log((out / ("poses_" + solver + ".csv")).string(), rows);

    double mean = 0.0, max = 0.0;
    for (double v : solve_ms) {
        mean += v;
        max = std::max(max, v);
    }
    if (!solve_ms.empty()) mean /= static_cast<double>(solve_ms.size());
    std::vector<double> sorted = solve_ms;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];

    std::cout << "localize(" << solver << "): " << rows.size() << " timesteps, " << failures
              << " failed, per-solve ms mean=" << mean << " median=" << median << " max=" << max
              << "\n";

    if (!timing_path.empty()) {
        nlohmann::json j;
        j["solver"] = solver;
        j["timesteps"] = rows.size();
        j["failures"] = failures;
        j["per_solve_ms"] = {{"mean", mean}, {"median", median}, {"max", max}};
        std::ofstream f(timing_path);
        if (!f) throw IoError("cannot write timing file '" + timing_path + "'");
        f << j.dump(2) << "\n";
    }
    return k_exit_ok;
}

int run_evaluate(const CommonOptions& opt, const std::string& pose_path,
                 const std::string& truth_path) {
    const auto out = ensure_out_dir(opt.out_dir);
    const auto poses = read_pose_log(pose_path);
    const auto truth = read_truth_log(truth_path.empty() ? (out / "truth.csv").string()
                                                         : truth_path);
    std::vector<AlignedRow> table;
    const EvaluationReport rep = evaluate_poses(poses, truth, &table);
    write_components_csv((out / "components.csv").string(), table);
    write_path_csv((out / "path.csv").string(), table);
    const std::string json = report_to_json(rep);
    std::ofstream f(out / "report.json");
    if (!f) throw IoError("cannot write report.json");
    f << json << "\n";
    std::cout << json << "\n";
    return k_exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetometer localization against parallel AC power lines"};
    app.require_subcommand(1);

    CommonOptions opt;
    double rate_override = -1.0;
    std::string solver = "analytic";
    std::string raw_path, phasor_path, pose_path, truth_path, timing_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opt.scenario, "Preset name or scenario JSON path")
            ->envname("MAGLOC_SCENARIO");
        cmd->add_option("--out", opt.out_dir, "Output directory")->envname("MAGLOC_OUT");
        cmd->add_option("--seed", opt.seed, "Noise seed override")->envname("MAGLOC_SEED");
        cmd->add_option("--freq", opt.frequency, "Line frequency, Hz")->envname("MAGLOC_FREQ");
        cmd->add_option("--window", opt.window, "Window length, samples")
            ->envname("MAGLOC_WINDOW");
        cmd->add_option("--hop", opt.hop, "Window hop, samples")->envname("MAGLOC_HOP");
    };

    auto* sim = app.add_subcommand("simulate", "Generate raw + ground-truth logs");
    add_common(sim);
    sim->add_option("--rate", rate_override, "Sampling rate override, Hz")
        ->envname("MAGLOC_RATE");

    auto* ext = app.add_subcommand("extract", "Raw log -> signed phasor log");
    add_common(ext);
    ext->add_option("--raw", raw_path, "Raw log path (default <out>/raw.csv)")
        ->envname("MAGLOC_RAW");

    auto* loc = app.add_subcommand("localize", "Phasor log -> pose log");
    add_common(loc);
    loc->add_option("--solver", solver, "analytic | numeric2 | numeric3")
        ->check(CLI::IsMember({"analytic", "numeric2", "numeric3"}))
        ->envname("MAGLOC_SOLVER");
    loc->add_option("--phasors", phasor_path, "Phasor log path (default <out>/phasors.csv)")
        ->envname("MAGLOC_PHASORS");
    loc->add_option("--timing", timing_path, "Write per-solve timing stats JSON here")
        ->envname("MAGLOC_TIMING");

    auto* eva = app.add_subcommand("evaluate", "Pose log vs truth -> report + plot CSVs");
    add_common(eva);
    eva->add_option("--poses", pose_path, "Pose log path")->required()
        ->envname("MAGLOC_POSES");
    eva->add_option("--truth", truth_path, "Truth log path (default <out>/truth.csv)")
        ->envname("MAGLOC_TRUTH");

    auto* run = app.add_subcommand("run", "simulate | extract | localize | evaluate");
    add_common(run);
    run->add_option("--solver", solver, "analytic | numeric2 | numeric3")
        ->check(CLI::IsMember({"analytic", "numeric2", "numeric3"}))
        ->envname("MAGLOC_SOLVER");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? k_exit_ok : k_exit_config;
    }

    try {
        if (sim->parsed()) return run_simulate(opt, rate_override);
        if (ext->parsed()) return run_extract(opt, raw_path, ext->count("--freq") > 0);
        if (loc->parsed()) return run_localize(opt, solver, phasor_path, timing_path);
        if (eva->parsed()) return run_evaluate(opt, pose_path, truth_path);
        if (run->parsed()) {
            int rc = run_simulate(opt, rate_override);
            if (rc != k_exit_ok) return rc;
            rc = run_extract(opt, "", run->count("--freq") > 0);
            if (rc != k_exit_ok) return rc;
            rc = run_localize(opt, solver, "", "");
            if (rc != k_exit_ok) return rc;
            const auto out = std::filesystem::path(opt.out_dir);
            return run_evaluate(opt, (out / ("poses_" + solver + ".csv")).string(), "");
        }
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return k_exit_config;
    } catch (const IoError& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return k_exit_io;
    } catch (const NumericError& e) {
        std::cerr << "error (numeric): " << e.what() << "\n";
        return k_exit_numeric;
    }
    return k_exit_ok;
}
