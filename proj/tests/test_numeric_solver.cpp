#include <doctest.h>

#include <cmath>
#include <random>

#include "magloc/analytic_solver.hpp"
#include "magloc/errors.hpp"
#include "magloc/numeric_solver.hpp"
#include "support/synth.hpp"

using namespace magloc;
using magloc::testing::make_readings;
using magloc::testing::test_rig;

namespace {

const ConductorLayout k_layout = ConductorLayout::two_wire(0.2, 31.0);

}  // namespace

TEST_CASE("direction: identity rig sees the wire axis") {
    const auto readings = make_readings(test_rig(), k_layout, 0.5, -1.0, {});
    const Vec3 v = estimate_direction(readings);
    CHECK(std::abs(std::abs(v.x) - 1.0) < 1e-9);
    CHECK(std::abs(v.y) < 1e-9);
    CHECK(std::abs(v.z) < 1e-9);
}

TEST_CASE("direction: yawed rig sees the rotated wire axis") {
    const Attitude att{40.0 * M_PI / 180.0, 0.0, 0.0};
    const auto readings = make_readings(test_rig(), k_layout, 0.5, -1.0, att);
    const Vec3 v = estimate_direction(readings);
    const Vec3 expect = att.rotation().transposed() * Vec3{1.0, 0.0, 0.0};
    const double align = std::abs(v.dot(expect));
    CHECK(align > 1.0 - 1e-6);
}

TEST_CASE("direction: parallel readings are degenerate") {
    PhasorSet readings;
    for (auto& r : readings) r.b = {0.0, 3e-6, 1e-6};
    CHECK_THROWS_AS(estimate_direction(readings), DegenerateGeometryError);
}

TEST_CASE("perpendicular basics") {
    const Vec3 p = perpendicular({1.0, 0.0, 0.0});
    CHECK(std::abs(std::abs(p.y) - 1.0) < 1e-12);
    CHECK_THROWS_AS(perpendicular({0.0, 0.0, 1.0}), VerticalDirectionError);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        Vec3 v{u(rng), u(rng), u(rng)};
        if (v.cross({0, 0, 1}).norm() < 1e-3) continue;
        const Vec3 q = perpendicular(v);
        CHECK(std::abs(q.dot(v.normalized())) < 1e-12);
        CHECK(std::abs(q.dot({0, 0, 1})) < 1e-12);
        CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

namespace {

CriterionContext context_for(double y, double z, const Attitude& att,
                             const ConductorLayout& layout, const SolverState& state) {
    const auto readings = make_readings(test_rig(), layout, y, z, att);
    const Vec3 dir = estimate_direction(readings);
    return CriterionContext::make(readings, test_rig(), att, layout, dir, state);
}

/// Ground-truth (s1, s2): project the known first-wire position (vehicle
/// frame) onto the anchor parameterization.
std::pair<double, double> truth_s(const CriterionContext& ctx, double rig_y, double rig_z,
                                  const Attitude& att) {
    const Mat3 rot_t = att.rotation().transposed();
    const auto& w0 = ctx.layout.conductors[0];
    const Vec3 wire_pos = rot_t * (Vec3{0.0, w0.offset_y, w0.offset_z} - Vec3{0.0, rig_y, rig_z});
    // wire_pos = s1 * z_hat + s2 * across (+ anything along the direction).
    const Vec3 z_hat{0.0, 0.0, 1.0};
    // Solve the 2x2 system in the span of {z_hat, across} projected off the
    // line direction.
    const Vec3 v = ctx.direction;
    const Vec3 p = wire_pos - v * wire_pos.dot(v);
    const Vec3 a = z_hat - v * z_hat.dot(v);
    const Vec3 b = ctx.across - v * ctx.across.dot(v);
    const double a11 = a.dot(a), a12 = a.dot(b), a22 = b.dot(b);
    const double r1 = a.dot(p), r2 = b.dot(p);
    const double det = a11 * a22 - a12 * a12;
    return {(r1 * a22 - r2 * a12) / det, (a11 * r2 - a12 * r1) / det};
}

}  // namespace

TEST_CASE("criterion vanishes at the true line position") {
    const Attitude att{12.0 * M_PI / 180.0, -5.0 * M_PI / 180.0, 0.0};
    const auto ctx = context_for(0.6, -1.0, att, k_layout, {});
    const auto [s1, s2] = truth_s(ctx, 0.6, -1.0, att);
    CHECK(criterion(s1, s2, ctx) < 1e-12);
    CHECK(criterion(s1 + 0.1, s2, ctx) > 1e-7);
    CHECK(criterion(s1, s2 - 0.1, ctx) > 1e-7);
}

TEST_CASE("criterion ignores the previous state when q is zero") {
    const Attitude att{0.2, 0.05, 0.0};
    SolverState state;
    state.has_previous = true;
    state.s1 = -0.4;
    state.s2 = 1.0;
    state.smoothing_weight = 0.0;
    const auto with_prev = context_for(0.5, -0.9, att, k_layout, state);
    const auto without = context_for(0.5, -0.9, att, k_layout, {});
    for (double s1 : {-1.0, 0.0, 0.7})
        for (double s2 : {-0.5, 0.3})
            CHECK(criterion(s1, s2, with_prev) == criterion(s1, s2, without));
}

TEST_CASE("smoothing strictly inflates the criterion away from the previous point") {
    const Attitude att{0.0, 0.0, 0.0};
    SolverState state;
    state.has_previous = true;
    state.s1 = 0.2;
    state.s2 = -0.3;
    state.smoothing_weight = 1.0;
    const auto smoothed = context_for(0.5, -0.9, att, k_layout, state);
    const auto plain = context_for(0.5, -0.9, att, k_layout, {});
    for (double s1 : {-1.0, 0.0, 0.9})
        for (double s2 : {-0.8, 0.4}) {
            if (std::abs(s1 - state.s1) + std::abs(s2 - state.s2) < 1e-12) continue;
            CHECK(criterion(s1, s2, smoothed) > criterion(s1, s2, plain));
        }
}

TEST_CASE("criterion is invariant under a direction sign flip") {
    const Attitude att{0.3, -0.1, 0.0};
    const auto readings = make_readings(test_rig(), k_layout, 0.4, -1.2, att);
    const Vec3 dir = estimate_direction(readings);
    const auto ctx_pos = CriterionContext::make(readings, test_rig(), att, k_layout, dir, {});
    const auto ctx_neg = CriterionContext::make(readings, test_rig(), att, k_layout, -dir, {});
    for (double s1 : {-1.0, 0.1, 0.8})
        for (double s2 : {-0.6, 0.5})
            CHECK(criterion(s1, s2, ctx_pos) == doctest::Approx(criterion(s1, s2, ctx_neg)));
}

TEST_CASE("solve recovers the pose, noise free") {
    const Attitude att{15.0 * M_PI / 180.0, 5.0 * M_PI / 180.0, 0.0};
    const auto readings = make_readings(test_rig(), k_layout, 0.6, -1.0, att, 3.0);
    const auto sol = solve_numeric(readings, test_rig(), att, k_layout, {});
    CHECK(sol.converged);
    CHECK(std::abs(sol.pose.y - 0.6) < 1e-4);
    CHECK(std::abs(sol.pose.z + 1.0) < 1e-4);
    CHECK(sol.pose.timestamp == 3.0);
    CHECK(sol.state.has_previous);
    CHECK(sol.pose.residual < 1e-9);
}

TEST_CASE("solve handles a global phasor sign flip") {
    const Attitude att{-10.0 * M_PI / 180.0, 4.0 * M_PI / 180.0, 0.0};
    auto readings = make_readings(test_rig(), k_layout, -0.5, -1.3, att);
    for (auto& r : readings) r.b = -r.b;
    const auto sol = solve_numeric(readings, test_rig(), att, k_layout, {});
    CHECK(std::abs(sol.pose.y + 0.5) < 1e-4);
    CHECK(std::abs(sol.pose.z + 1.3) < 1e-4);
}

TEST_CASE("agreement with the analytic solver on noise-free readings") {
    std::mt19937_64 rng(97);
    for (int k = 0; k < 20; ++k) {
        const auto pose = magloc::testing::random_pose(rng);
        const Attitude att{pose.yaw, pose.pitch, 0.0};
        PhasorSet readings;
        try {
            readings = make_readings(test_rig(), k_layout, pose.y, pose.z, att);
        } catch (const SingularPointError&) {
            continue;
        }
        PoseEstimate analytic;
        try {
            analytic = solve_pose(readings, test_rig(), k_layout);
        } catch (const NumericError&) {
            continue;
        }
        const auto numeric =
            solve_numeric(readings, test_rig(), analytic.attitude.attitude(), k_layout, {});
        CHECK(std::abs(numeric.pose.y - analytic.y) < 1e-3);
        CHECK(std::abs(numeric.pose.z - analytic.z) < 1e-3);
    }
}

TEST_CASE("three-wire template wins on three-wire data") {
    ConductorLayout three = k_layout;
    three.conductors.push_back({-0.2 + 5.0, -1.5, -62.0});

    const Attitude att{5.0 * M_PI / 180.0, 2.0 * M_PI / 180.0, 0.0};
    const auto readings = make_readings(test_rig(), three, 0.6, -1.0, att);

    const auto with_three = solve_numeric(readings, test_rig(), att, three, {});
    const auto with_two = solve_numeric(readings, test_rig(), att, k_layout, {});

    const double err3 = std::hypot(with_three.pose.y - 0.6, with_three.pose.z + 1.0);
    const double err2 = std::hypot(with_two.pose.y - 0.6, with_two.pose.z + 1.0);
    CHECK(err3 < 1e-4);
    CHECK(err2 > err3);
}

TEST_CASE("noisy solve keeps the median error small") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uy(-1.5, 1.5);
    std::uniform_real_distribution<double> uz(-1.8, -0.4);
    std::vector<double> errors;
    for (int k = 0; k < 100; ++k) {
        const double y = uy(rng), z = uz(rng);
        const Attitude att{0.3 * gauss(rng), 0.1 * gauss(rng), 0.0};
        PhasorSet readings = make_readings(test_rig(), k_layout, y, z, att);
        for (auto& r : readings) {
            r.b.x *= 1.0 + 0.01 * gauss(rng);
            r.b.y *= 1.0 + 0.01 * gauss(rng);
            r.b.z *= 1.0 + 0.01 * gauss(rng);
        }
        try {
            // Attitude from the analytic stage, as in the pipeline.
            const auto analytic = solve_pose(readings, test_rig(), k_layout);
            const auto sol =
                solve_numeric(readings, test_rig(), analytic.attitude.attitude(), k_layout, {});
            errors.push_back(std::hypot(sol.pose.y - y, sol.pose.z - z));
        } catch (const NumericError&) {
            errors.push_back(1e9);
        }
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    CHECK(errors[errors.size() / 2] < 0.05);
}
