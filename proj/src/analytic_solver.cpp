#include "magloc/analytic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magloc/errors.hpp"
#include "magloc/optimizer.hpp"

namespace magloc {

double estimate_yaw(const Vec3& b_l, const Vec3& b_n, double pair_threshold) {
    const Vec3 v = b_l.cross(b_n);
    if (v.norm() < pair_threshold * b_l.norm() * b_n.norm())
        throw DegeneratePairError("phasor pair is near parallel, yaw is unobservable");
    // In the vehicle frame the cross product of two wire-frame-planar fields
    // is c*(cos b cos a, -cos b sin a, sin b); the sign of c leaves yaw
    // defined modulo pi.
    return std::atan2(-v.y, v.x);
}

double estimate_pitch(const Vec3& b_m, double yaw, double denominator_floor) {
    const double num = b_m.y * std::sin(yaw) - b_m.x * std::cos(yaw);
    const double den = b_m.z;
    if (std::abs(den) < denominator_floor)
        throw DegenerateDenominatorError("pitch denominator vanishes (z component ~ 0)");
    // num/den = tan(pitch) with the z-component sign cancelling; keep the
    // result in (-pi/2, pi/2).
    return std::atan2(num * (den < 0.0 ? -1.0 : 1.0), std::abs(den));
}

double z_squared(double y, double p, int sign, double y0, double c) {
    if (!(p > 0.0)) throw InvalidEnergyError("field energy must be positive");
    const double c2_p2 = (c / p) * (c / p);
    const double radicand = y * y * y0 * y0 - c2_p2 * y0 * y0 + c2_p2 * c2_p2;
    if (radicand < 0.0)
        throw NegativeRadicandError("no real z^2 on this branch");
    return (sign >= 0 ? 2.0 : -2.0) * std::sqrt(radicand) - y0 * y0 - y * y + 2.0 * c2_p2;
}

std::pair<double, double> y_candidates(double b_z, double p, double y0, double c) {
    if (!(p > 0.0)) throw InvalidEnergyError("field energy must be positive");
    const double p2 = p * p;
    if (p2 < b_z * b_z)
        throw InvalidEnergyError("|Bz| exceeds the total field energy");
    const double a = p2 * p2 * y0 * y0 + (2.0 * b_z * b_z - p2) * c * c;
    const double b = 2.0 * c * c * b_z * std::sqrt(p2 - b_z * b_z);
    const double r = std::hypot(a, b);
    const double phi = std::atan2(b, a);
    const double spread = std::sqrt(r) * std::cos(0.5 * phi);
    return {(c * b_z + spread) / p2, (c * b_z - spread) / p2};
}

std::vector<PositionCandidate> enumerate_candidates(const Vec3& b_global, double y0, double c,
                                                    double tolerance) {
    const double p = std::hypot(b_global.y, b_global.z);
    if (!(p > 0.0)) throw InvalidEnergyError("zero reading has no position information");
    const double b_z = b_global.z;
    const auto [y1, y2] = y_candidates(b_z, p, y0, c);

    const double current = c / 2.0e-7;  // invert the prefactor for field evaluation
    std::vector<PositionCandidate> out;
    auto consider = [&](double y, int root_index) {
        for (int branch : {+1, -1}) {
            double zz;
            try {
                zz = z_squared(y, p, branch, y0, c);
            } catch (const NegativeRadicandError&) {
                continue;
            }
            if (zz < 0.0) continue;
            const double z_abs = std::sqrt(zz);
            for (int z_sign : {+1, -1}) {
                const double z = z_sign * z_abs;
                Vec3 model;
                try {
                    model = field_two_wire(y, z, y0, current);
                } catch (const SingularPointError&) {
                    continue;
                }
                // Keep only branches that actually reproduce the measured
                // energy and z component; the quartic introduces spurious
                // combinations otherwise.
                if (std::abs(std::hypot(model.y, model.z) - p) > tolerance * p) continue;
                if (std::abs(model.z - b_z) > tolerance * p) continue;
                bool duplicate = false;
                for (const auto& c0 : out)
                    if (std::abs(c0.y - y) < 1e-9 && std::abs(c0.z - z) < 1e-9) duplicate = true;
                if (!duplicate) out.push_back({y, z, root_index, z_sign});
            }
        }
    };
    consider(y1, 1);
    consider(y2, 2);
    if (out.empty())
        throw NoCandidateError("no position candidate reproduces the reading");
    return out;
}

namespace {

struct Solution {
    double y = 0.0, z = 0.0, yaw = 0.0, pitch = 0.0, consistency = 0.0;
    double sign = 1.0;  // global phasor sign hypothesis
    double score = std::numeric_limits<double>::infinity();
    std::array<Vec3, 4> sensor_positions{};
};

/// Measurement-mismatch criterion of the selection stage: sum over usable
/// sensors of |B_mi - R^-1 B(p_i)|, inflated by pose jumps against the
/// previous estimate. The yaw term separates the current-direction mirror
/// branches, which coincide in position on the symmetry plane. Components
/// stored as exactly zero were below the extraction noise floor and carry no
/// information, so they are excluded from the mismatch.
double selection_score(const Solution& s, const PhasorSet& readings, const SensorRig& rig,
                       const std::vector<int>& usable, const Mat3& rot,
                       const ConductorLayout& layout, const PoseEstimate* previous,
                       double q) {
    const Mat3 rot_t = rot.transposed();
    double j = 0.0;
    for (int i : usable) {
        const Vec3 p = Vec3{0.0, s.y, s.z} + rot * rig.sensor_positions[i];
        Vec3 model;
        try {
            model = field_multi_wire({0.0, p.y, p.z}, layout);
        } catch (const SingularPointError&) {
            return std::numeric_limits<double>::infinity();
        }
        const Vec3 b = readings[i].b;
        const Vec3 diff = b * s.sign - rot_t * model;
        double sq = 0.0;
        if (b.x != 0.0) sq += diff.x * diff.x;
        if (b.y != 0.0) sq += diff.y * diff.y;
        if (b.z != 0.0) sq += diff.z * diff.z;
        j += std::sqrt(sq);
    }
    if (previous != nullptr)
        j *= 1.0 + q * (std::abs(s.y - previous->y) + std::abs(s.z - previous->z) +
                        0.5 * std::abs(wrap_angle(s.yaw - previous->attitude.yaw)));
    return j;
}

/// The current-direction mirror: flipping the assumed phasor sign maps every
/// exact solution to (-y, z, yaw+pi, -pitch). The pair is indistinguishable
/// from AC data alone.
bool mirror_twins(const Solution& a, const Solution& b) {
    const double scale = 1.0 + std::abs(a.y);
    return a.sign == -b.sign && std::abs(a.y + b.y) < 1e-6 * scale &&
           std::abs(a.z - b.z) < 1e-6 &&
           std::abs(wrap_angle(a.yaw - b.yaw - M_PI)) < 1e-6 &&
           std::abs(a.pitch + b.pitch) < 1e-6;
}

}  // namespace

PoseEstimate solve_pose(const PhasorSet& readings, const SensorRig& rig,
                        const ConductorLayout& layout, const PoseEstimate* previous,
                        const AnalyticConfig& config) {
    rig.validate();
    const double y0 = layout.pair_half_spacing();
    const double c = layout.pair_prefactor();

    std::vector<int> usable;
    for (int i = 0; i < 4; ++i)
        if (readings[i].b.norm() > config.reading_floor) usable.push_back(i);
    if (usable.size() < 2)
        throw DegeneratePairError("need at least two sensors with usable readings");

    // Yaw and pitch come from the best-conditioned pair; prefer pairs whose
    // z components can also carry the pitch equation (the sign-resolution
    // noise floor zeroes weak axes).
    int best_l = -1, best_n = -1;
    double best_cross = -1.0;
    int guarded_l = -1, guarded_n = -1;
    double guarded_cross = -1.0;
    for (std::size_t a = 0; a < usable.size(); ++a)
        for (std::size_t b = a + 1; b < usable.size(); ++b) {
            const int i = usable[a], j = usable[b];
            const double cr = readings[i].b.cross(readings[j].b).norm();
            if (cr > best_cross) {
                best_cross = cr;
                best_l = i;
                best_n = j;
            }
            if (std::abs(readings[i].b.z) >= config.pitch_z_floor &&
                std::abs(readings[j].b.z) >= config.pitch_z_floor && cr > guarded_cross) {
                guarded_cross = cr;
                guarded_l = i;
                guarded_n = j;
            }
        }
    if (guarded_l >= 0) {
        best_l = guarded_l;
        best_n = guarded_n;
    }
    const double yaw_base =
        estimate_yaw(readings[best_l].b, readings[best_n].b, config.pair_threshold);

    std::vector<Solution> solutions;
    for (double yaw : {yaw_base, wrap_angle(yaw_base + M_PI)}) {
        const double pitch_l = estimate_pitch(readings[best_l].b, yaw, config.denominator_floor);
        const double pitch_n = estimate_pitch(readings[best_n].b, yaw, config.denominator_floor);
        const double pitch = 0.5 * (pitch_l + pitch_n);
        const double consistency = std::abs(pitch_l - pitch_n);
        const Attitude att{yaw, pitch, 0.0};
        const Mat3 rot = att.rotation();

        for (double sign : {+1.0, -1.0}) {
            // Per-sensor candidate positions in the wire frame.
            std::vector<std::vector<PositionCandidate>> cands(usable.size());
            bool viable = true;
            for (std::size_t k = 0; k < usable.size(); ++k) {
                try {
                    cands[k] = enumerate_candidates(rot * (readings[usable[k]].b * sign), y0, c,
                                                    config.candidate_tolerance);
                } catch (const NumericError&) {
                    viable = false;
                    break;
                }
            }
            if (!viable) continue;

            // Depth-first combination search with pairwise-distance pruning
            // against the rig geometry projected onto the observable y-z
            // plane (the along-wire offset is unobservable).
            auto rig_distance = [&](std::size_t a, std::size_t b) {
                const Vec3 d =
                    rot * (rig.sensor_positions[usable[a]] - rig.sensor_positions[usable[b]]);
                return std::hypot(d.y, d.z);
            };
            auto candidate_pos = [&](std::size_t k, std::size_t idx) {
                return Vec3{0.0, cands[k][idx].y, cands[k][idx].z};
            };

            std::vector<std::size_t> stack_idx(usable.size(), 0);
            std::size_t depth = 0;
            while (true) {
                if (stack_idx[depth] >= cands[depth].size()) {
                    if (depth == 0) break;
                    stack_idx[depth] = 0;
                    --depth;
                    ++stack_idx[depth];
                    continue;
                }
                bool consistent = true;
                for (std::size_t prev_k = 0; prev_k < depth; ++prev_k) {
                    const double d_meas =
                        (candidate_pos(depth, stack_idx[depth]) - candidate_pos(prev_k, stack_idx[prev_k]))
                            .norm();
                    if (std::abs(d_meas - rig_distance(depth, prev_k)) > config.geometry_tolerance) {
                        consistent = false;
                        break;
                    }
                }
                if (!consistent) {
                    ++stack_idx[depth];
                    continue;
                }
                if (depth + 1 < usable.size()) {
                    ++depth;
                    continue;
                }

                // Complete combination: rigidify and score.
                Solution s;
                s.yaw = yaw;
                s.pitch = pitch;
                s.consistency = consistency;
                s.sign = sign;
                Vec3 origin;
                for (std::size_t k = 0; k < usable.size(); ++k)
                    origin += candidate_pos(k, stack_idx[k]) - rot * rig.sensor_positions[usable[k]];
                origin = origin / static_cast<double>(usable.size());
                s.y = origin.y;
                s.z = origin.z;
                for (std::size_t k = 0; k < usable.size(); ++k) {
                    const auto& cd = cands[k][stack_idx[k]];
                    s.sensor_positions[usable[k]] = {0.0, cd.y, cd.z};
                }
                s.score = selection_score(s, readings, rig, usable, rot, layout, previous,
                                          config.smoothing_weight);
                if (std::isfinite(s.score)) solutions.push_back(std::move(s));
                ++stack_idx[depth];
            }
        }
    }

    if (solutions.empty())
        throw NoCandidateError("no rigid-body consistent candidate combination found");

    std::stable_sort(solutions.begin(), solutions.end(),
                     [](const Solution& a, const Solution& b) { return a.score < b.score; });

    // Distinct poses inside the tie window of the front runner. The absolute
    // floor keeps noise-free roundoff-level scores in one tie set.
    const double tie_limit = solutions.front().score * (1.0 + config.ambiguity_ratio) + 1e-18;
    std::vector<const Solution*> ties = {&solutions.front()};
    for (std::size_t i = 1; i < solutions.size(); ++i) {
        const Solution& s = solutions[i];
        if (s.score > tie_limit) break;
        bool duplicate = false;
        for (const Solution* t : ties)
            if (std::abs(s.y - t->y) + std::abs(s.z - t->z) <= 1e-3 &&
                std::abs(wrap_angle(s.yaw - t->yaw)) <= 1e-3)
                duplicate = true;
        if (!duplicate) ties.push_back(&s);
    }

    const Solution* chosen = ties.front();
    if (ties.size() == 2 && mirror_twins(*ties[0], *ties[1]) && std::abs(ties[0]->y) > 1e-3) {
        // The current-direction mirror pair: resolved by continuity against
        // the previous pose, or by trusting the handed signs at stream start.
        if (previous != nullptr) {
            auto jump = [&](const Solution& s) {
                return std::abs(s.y - previous->y) + std::abs(s.z - previous->z) +
                       0.5 * std::abs(wrap_angle(s.yaw - previous->attitude.yaw));
            };
            chosen = (jump(*ties[1]) < jump(*ties[0])) ? ties[1] : ties[0];
        } else {
            chosen = (ties[0]->sign > 0.0) ? ties[0] : ties[1];
        }
    } else if (ties.size() > 1) {
        throw AmbiguousPoseError("two candidate poses score within the ambiguity ratio");
    }
    Solution best = *chosen;

    if (config.polish) {
        auto objective = [&](std::span<const double> p) {
            Solution trial = best;
            trial.y = p[0];
            trial.z = p[1];
            trial.yaw = p[2];
            trial.pitch = p[3];
            const Mat3 r = Attitude{p[2], p[3], 0.0}.rotation();
            const double score = selection_score(trial, readings, rig, usable, r, layout,
                                                 previous, config.smoothing_weight);
            return std::isfinite(score) ? score : 1e30;
        };
        OptimizerConfig oc;
        oc.max_iterations = 300;
        oc.x_tolerance = 1e-9;
        oc.f_tolerance = 1e-26;
        oc.initial_simplex_scale = {0.01};
        const std::vector<double> start = {best.y, best.z, best.yaw, best.pitch};
        const auto refined = nelder_mead(objective, start, oc);
        if (refined.f_min < best.score) {
            best.y = refined.x_min[0];
            best.z = refined.x_min[1];
            best.yaw = wrap_angle(refined.x_min[2]);
            best.pitch = refined.x_min[3];
            best.score = refined.f_min;
            const Mat3 r = Attitude{best.yaw, best.pitch, 0.0}.rotation();
            for (int i : usable) {
                const Vec3 p = Vec3{0.0, best.y, best.z} + r * rig.sensor_positions[i];
                best.sensor_positions[i] = {0.0, p.y, p.z};
            }
        }
    }

    PoseEstimate pose;
    pose.y = best.y;
    pose.z = best.z;
    pose.attitude = {best.yaw, best.pitch, 0.0, best.consistency};
    pose.sensor_positions = best.sensor_positions;
    pose.residual = best.score;
    pose.timestamp = readings[0].timestamp;
    return pose;
}

}  // namespace magloc
