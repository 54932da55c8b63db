#pragma once

#include "magloc/analytic_solver.hpp"
#include "magloc/field_model.hpp"
#include "magloc/geometry.hpp"
#include "magloc/optimizer.hpp"
#include "magloc/signal_proc.hpp"

namespace magloc {

/// Two parallel conductor lines in the vehicle frame.
struct LinePair {
    Vec3 anchor1;    // point on the first line
    Vec3 anchor2;    // anchor1 + separation * perpendicular
    Vec3 direction;  // unit
    double separation = 0.0;  // m
};

/// Per-stream optimizer state: the previous (s1, s2) minimizer and the
/// smoothing weight penalizing jumps away from it.
struct SolverState {
    bool has_previous = false;
    double s1 = 0.0;
    double s2 = 0.0;
    double smoothing_weight = 1.0;  // q
    double residual = 0.0;          // last criterion value
};

struct NumericConfig {
    OptimizerConfig opt = [] {
        OptimizerConfig c;
        c.max_iterations = 400;
        c.x_tolerance = 1e-8;  // m
        c.f_tolerance = 1e-16;
        c.initial_simplex_scale = {0.05};
        return c;
    }();
    double grid_extent = 2.0;        // m, multi-start grid half width
    int grid_points = 3;             // per axis
    double direction_threshold = 1e-3;
    double reading_floor = 1e-9;     // T
};

/// Common line direction from the sign-aligned sum of all pairwise cross
/// products of the phasor vectors. Unit output; its overall sign is
/// arbitrary. Throws DegenerateGeometryError when every cross product is
/// negligible.
Vec3 estimate_direction(const PhasorSet& readings, double threshold = 1e-3,
                        double reading_floor = 1e-9);

/// Normalized direction perpendicular to both the line direction and the
/// vehicle vertical. Throws VerticalDirectionError for near-vertical lines.
Vec3 perpendicular(const Vec3& direction);

/// Everything the two-variable criterion needs besides (s1, s2).
struct CriterionContext {
    PhasorSet readings;
    SensorRig rig;
    Attitude attitude;
    ConductorLayout layout;  // template: separation comes from the first two wires
    Vec3 direction;          // line direction in the vehicle frame
    SolverState state;
    double sign = 1.0;       // global phasor sign hypothesis

    /// Frame axes derived once: across-pair and wire-frame-up directions in
    /// the vehicle frame, orientation fixed by the attitude.
    Vec3 across;
    Vec3 up;

    static CriterionContext make(const PhasorSet& readings, const SensorRig& rig,
                                 const Attitude& attitude, const ConductorLayout& layout,
                                 const Vec3& direction, const SolverState& state);
};

/// Wire positions hypothesized from (s1, s2) in the context frame.
LinePair line_pair_from(double s1, double s2, const CriterionContext& ctx);

/// Measurement-mismatch criterion: sum over sensors of the absolute vector
/// difference between the measured phasor and the model field of the
/// hypothesized lines, multiplied by the jump-smoothing factor when a
/// previous state exists. Throws SingularPointError when a sensor coincides
/// with a hypothesized wire.
double criterion(double s1, double s2, const CriterionContext& ctx);

struct NumericSolution {
    LinePair lines;
    SolverState state;
    PoseEstimate pose;
    bool converged = false;
};

/// Multi-start minimization of the criterion over (s1, s2), returning the
/// best line pair, the chained state, and the equivalent rig pose in the
/// wire frame. The optional pose hint breaks the current-direction mirror
/// tie of the two phasor-sign hypotheses, which the criterion alone cannot
/// resolve for a symmetric pair.
NumericSolution solve_numeric(const PhasorSet& readings, const SensorRig& rig,
                              const Attitude& attitude, const ConductorLayout& layout,
                              const SolverState& state, const NumericConfig& config = {},
                              const PoseEstimate* pose_hint = nullptr);

}  // namespace magloc
