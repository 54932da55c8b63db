#include "magloc/numeric_solver.hpp"

#include <cmath>

#include "magloc/errors.hpp"

namespace magloc {

Vec3 estimate_direction(const PhasorSet& readings, double threshold, double reading_floor) {
    std::vector<int> usable;
    std::vector<int> clean;  // no component zeroed by the extraction floor
    for (int i = 0; i < 4; ++i) {
        const Vec3& b = readings[i].b;
        if (b.norm() < reading_floor) continue;
        usable.push_back(i);
        if (b.x != 0.0 && b.y != 0.0 && b.z != 0.0) clean.push_back(i);
    }
    // A floor-zeroed component corrupts every cross product of its sensor;
    // prefer fully-resolved sensors when enough of them exist.
    const std::vector<int>& set = (clean.size() >= 2) ? clean : usable;

    Vec3 sum;
    Vec3 anchor;
    bool have_anchor = false;
    for (std::size_t a = 0; a < set.size(); ++a) {
        for (std::size_t b = a + 1; b < set.size(); ++b) {
            const Vec3& bi = readings[set[a]].b;
            const Vec3& bj = readings[set[b]].b;
            const Vec3 cr = bi.cross(bj);
            if (cr.norm() < threshold * bi.norm() * bj.norm()) continue;
            if (!have_anchor) {
                anchor = cr;
                have_anchor = true;
            }
            // Align each term with the first usable one so opposite-handed
            // pairs reinforce instead of cancelling.
            sum += (cr.dot(anchor) < 0.0) ? -cr : cr;
        }
    }
    if (!have_anchor || sum.norm() == 0.0)
        throw DegenerateGeometryError("all phasor cross products are degenerate");
    return sum.normalized();
}

Vec3 perpendicular(const Vec3& direction) {
    const Vec3 v = direction.normalized();
    const Vec3 cr = v.cross({0.0, 0.0, 1.0});
    if (cr.norm() < 1e-6)
        throw VerticalDirectionError("line direction is vertical");
    return cr.normalized();
}

CriterionContext CriterionContext::make(const PhasorSet& readings, const SensorRig& rig,
                                        const Attitude& attitude, const ConductorLayout& layout,
                                        const Vec3& direction, const SolverState& state) {
    layout.validate();
    if (layout.conductors.size() < 2)
        throw ConfigError("numeric template needs at least the conductor pair");

    CriterionContext ctx;
    ctx.readings = readings;
    ctx.rig = rig;
    ctx.attitude = attitude;
    ctx.layout = layout;
    ctx.direction = direction.normalized();
    ctx.state = state;

    // Orient the frame with the attitude so that template offsets and signed
    // currents keep their wire-frame meaning; this also makes the result
    // independent of the arbitrary sign of the estimated direction.
    const Mat3 rot_t = attitude.rotation().transposed();
    const Vec3 wire_x = rot_t * Vec3{1.0, 0.0, 0.0};
    const Vec3 wire_y = rot_t * Vec3{0.0, 1.0, 0.0};
    const Vec3 wire_z = rot_t * Vec3{0.0, 0.0, 1.0};
    if (ctx.direction.dot(wire_x) < 0.0) ctx.direction = -ctx.direction;
    Vec3 across = perpendicular(ctx.direction);
    if (across.dot(wire_y) < 0.0) across = -across;
    Vec3 up = across.cross(ctx.direction);
    if (up.dot(wire_z) < 0.0) up = -up;
    ctx.across = across;
    ctx.up = up.normalized();
    return ctx;
}

LinePair line_pair_from(double s1, double s2, const CriterionContext& ctx) {
    LinePair lines;
    lines.direction = ctx.direction;
    lines.separation = ctx.layout.pair_separation();
    lines.anchor1 = Vec3{0.0, 0.0, 1.0} * s1 + ctx.across * s2;
    lines.anchor2 = lines.anchor1 + ctx.across * lines.separation;
    return lines;
}

namespace {

Vec3 line_field(const Vec3& point, const Vec3& anchor, const Vec3& direction, double current) {
    const Vec3 rel = point - anchor;
    const Vec3 perp = rel - direction * rel.dot(direction);
    const double d2 = perp.dot(perp);
    if (d2 < k_singularity_radius * k_singularity_radius)
        throw SingularPointError("sensor coincides with a hypothesized wire");
    return direction.cross(perp) * (wire_prefactor(current) / d2);
}

}  // namespace

double criterion(double s1, double s2, const CriterionContext& ctx) {
    const LinePair lines = line_pair_from(s1, s2, ctx);
    const auto& wires = ctx.layout.conductors;
    const double base_y = wires[0].offset_y;
    const double base_z = wires[0].offset_z;

    double j = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Vec3 p = ctx.rig.sensor_positions[i];
        Vec3 model;
        for (std::size_t k = 0; k < wires.size(); ++k) {
            const Vec3 anchor = lines.anchor1 + ctx.across * (wires[k].offset_y - base_y) +
                                ctx.up * (wires[k].offset_z - base_z);
            model += line_field(p, anchor, lines.direction, wires[k].current);
        }
        // Exact-zero components were below the extraction noise floor and
        // carry no information.
        const Vec3 b = ctx.readings[i].b;
        const Vec3 diff = b * ctx.sign - model;
        double sq = 0.0;
        if (b.x != 0.0) sq += diff.x * diff.x;
        if (b.y != 0.0) sq += diff.y * diff.y;
        if (b.z != 0.0) sq += diff.z * diff.z;
        j += std::sqrt(sq);
    }
    if (ctx.state.has_previous)
        j *= 1.0 + ctx.state.smoothing_weight *
                       (std::abs(s1 - ctx.state.s1) + std::abs(s2 - ctx.state.s2));
    return j;
}

namespace {

std::pair<double, double> pose_from_anchor(const Vec3& anchor, const CriterionContext& ctx) {
    // The first template wire sits at offsets (y_0, z_0), so express the
    // vehicle origin against that anchor.
    const auto& w0 = ctx.layout.conductors[0];
    return {w0.offset_y - anchor.dot(ctx.across), w0.offset_z - anchor.dot(ctx.up)};
}

}  // namespace

NumericSolution solve_numeric(const PhasorSet& readings, const SensorRig& rig,
                              const Attitude& attitude, const ConductorLayout& layout,
                              const SolverState& state, const NumericConfig& config,
                              const PoseEstimate* pose_hint) {
    rig.validate();
    // The cross-product direction estimate needs fully resolved vectors; a
    // component zeroed by the extraction noise floor removes exactly the
    // tilt information it would carry. Fall back to the attitude-implied
    // wire axis in that case.
    bool floored = false;
    for (const auto& r : readings) {
        if (r.b.norm() < config.reading_floor) continue;
        if (r.b.x == 0.0 || r.b.y == 0.0 || r.b.z == 0.0) floored = true;
    }
    const Vec3 direction =
        floored ? attitude.rotation().transposed() * Vec3{1.0, 0.0, 0.0}
                : estimate_direction(readings, config.direction_threshold, config.reading_floor);
    CriterionContext ctx =
        CriterionContext::make(readings, rig, attitude, layout, direction, state);

    // Multi-start grid centered on the previous minimizer.
    const double c1 = state.has_previous ? state.s1 : 0.0;
    const double c2 = state.has_previous ? state.s2 : 0.0;
    std::vector<std::vector<double>> starts;
    const int n = std::max(config.grid_points, 1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double fa = (n == 1) ? 0.0 : -1.0 + 2.0 * a / (n - 1.0);
            const double fb = (n == 1) ? 0.0 : -1.0 + 2.0 * b / (n - 1.0);
            starts.push_back({c1 + fa * config.grid_extent, c2 + fb * config.grid_extent});
        }

    struct SignResult {
        OptimizationResult opt;
        double sign = 1.0;
        bool ok = false;
    };
    std::array<SignResult, 2> results;
    int idx = 0;
    for (double sign : {+1.0, -1.0}) {
        ctx.sign = sign;
        auto objective = [&ctx](std::span<const double> p) {
            try {
                return criterion(p[0], p[1], ctx);
            } catch (const SingularPointError&) {
                return 1e30;  // steer the simplex away from wire collisions
            }
        };
        results[idx].sign = sign;
        try {
            results[idx].opt = multi_start(objective, starts, config.opt);
            results[idx].ok = true;
        } catch (const NumericError&) {
            results[idx].ok = false;
        }
        ++idx;
    }
    if (!results[0].ok && !results[1].ok)
        throw DegenerateGeometryError("criterion minimization failed for both sign hypotheses");

    const SignResult* winner = results[0].ok ? &results[0] : &results[1];
    if (results[0].ok && results[1].ok) {
        const double ja = results[0].opt.f_min, jb = results[1].opt.f_min;
        const bool tie = std::abs(ja - jb) <= 0.01 * std::max(ja, jb) + 1e-18;
        if (tie && pose_hint != nullptr) {
            // Sign hypotheses tie exactly for a symmetric pair; follow the
            // side the caller knows the rig to be on.
            auto dist = [&](const SignResult& r) {
                const Vec3 anchor =
                    Vec3{0.0, 0.0, 1.0} * r.opt.x_min[0] + ctx.across * r.opt.x_min[1];
                const auto [py, pz] = pose_from_anchor(anchor, ctx);
                return std::abs(py - pose_hint->y) + std::abs(pz - pose_hint->z);
            };
            winner = (dist(results[1]) < dist(results[0])) ? &results[1] : &results[0];
        } else if (jb < ja) {
            winner = &results[1];
        }
    }
    const OptimizationResult& best = winner->opt;

    NumericSolution sol;
    ctx.sign = winner->sign;
    sol.lines = line_pair_from(best.x_min[0], best.x_min[1], ctx);
    sol.converged = best.converged;

    sol.state = state;
    sol.state.has_previous = true;
    sol.state.s1 = best.x_min[0];
    sol.state.s2 = best.x_min[1];
    sol.state.residual = best.f_min;

    const auto [pose_y, pose_z] = pose_from_anchor(sol.lines.anchor1, ctx);
    sol.pose.y = pose_y;
    sol.pose.z = pose_z;
    sol.pose.attitude = {attitude.yaw, attitude.pitch, 0.0, 0.0};
    sol.pose.residual = best.f_min;
    sol.pose.timestamp = readings[0].timestamp;
    const Mat3 rot = attitude.rotation();
    for (int i = 0; i < 4; ++i) {
        const Vec3 p = Vec3{0.0, sol.pose.y, sol.pose.z} + rot * rig.sensor_positions[i];
        sol.pose.sensor_positions[i] = {0.0, p.y, p.z};
    }
    return sol;
}

}  // namespace magloc
