#include <doctest.h>

#include <random>

#include "magloc/biot_savart.hpp"
#include "magloc/errors.hpp"
#include "magloc/field_model.hpp"

using namespace magloc;

TEST_CASE("two-wire field has no longitudinal component") {
    const Vec3 b = field_two_wire(0.3, 1.0, 0.2, 31.0);
    CHECK(b.x == 0.0);
}

TEST_CASE("z component vanishes on the symmetry plane") {
    const Vec3 b = field_two_wire(0.0, 1.0, 0.2, 31.0);
    CHECK(b.z == 0.0);
}

TEST_CASE("two-wire field value below the pair") {
    // Frozen from the finite-segment quadrature oracle (see
    // test_biot_savart.cpp for the live comparison).
    const Vec3 b = field_two_wire(0.0, -1.0, 0.2, 31.0);
    CHECK(b.y == doctest::Approx(1.1923076923e-5).epsilon(1e-9));
}

TEST_CASE("single wire reduces to the hand-evaluated term") {
    ConductorLayout layout;
    layout.conductors = {{0.0, 0.0, 31.0}};
    const Vec3 b = field_multi_wire({0.0, 0.0, -1.0}, layout);
    // C * (-z)/(y^2+z^2) with C = 31 * mu0 / (2 pi) = 6.2e-6 exactly.
    CHECK(b.y == doctest::Approx(6.2e-6).epsilon(1e-15));
    CHECK(b.z == doctest::Approx(0.0));
}

TEST_CASE("multi-wire matches two-wire for the canonical pair") {
    const auto layout = ConductorLayout::two_wire(0.2, 31.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 10; ++k) {
        const double y = u(rng), z = u(rng);
        if (std::abs(z) < 0.05) continue;
        const Vec3 a = field_two_wire(y, z, 0.2, 31.0);
        const Vec3 b = field_multi_wire({0.0, y, z}, layout);
        CHECK((a - b).norm() <= 1e-14 * a.norm());
    }
}

TEST_CASE("three-wire layout superposes independent single-wire terms") {
    ConductorLayout layout;
    layout.conductors = {{-0.2, 0.0, 31.0}, {0.2, 0.0, 31.0}, {4.8, -1.5, -62.0}};
    const Vec3 p{0.0, 0.4, -1.1};
    Vec3 expect;
    for (const auto& w : layout.conductors) {
        // Hand-evaluated single-wire closed form.
        const double dy = p.y - w.offset_y, dz = p.z - w.offset_z;
        const double r2 = dy * dy + dz * dz;
        const double c = w.current * 2e-7;
        expect += Vec3{0.0, -c * dz / r2, c * dy / r2};
    }
    const Vec3 got = field_multi_wire(p, layout);
    CHECK((got - expect).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("superposition over singleton layouts") {
    ConductorLayout layout;
    layout.conductors = {{-0.2, 0.0, 31.0}, {0.2, 0.0, 31.0}, {4.8, -1.5, -62.0}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int k = 0; k < 20; ++k) {
        const Vec3 p{0.0, u(rng), u(rng) - 0.5};
        Vec3 sum;
        bool singular = false;
        for (const auto& w : layout.conductors) {
            ConductorLayout single;
            single.conductors = {w};
            try {
                sum += field_multi_wire(p, single);
            } catch (const SingularPointError&) {
                singular = true;
            }
        }
        if (singular) continue;
        const Vec3 whole = field_multi_wire(p, layout);
        CHECK((whole - sum).norm() <= 1e-12 * whole.norm());
    }
}

TEST_CASE("mirror symmetry in y") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    for (int k = 0; k < 20; ++k) {
        const double y = u(rng), z = -u(rng);
        const Vec3 a = field_two_wire(y, z, 0.2, 31.0);
        const Vec3 b = field_two_wire(-y, z, 0.2, 31.0);
        CHECK(b.y == doctest::Approx(a.y).epsilon(1e-14));
        CHECK(b.z == doctest::Approx(-a.z).epsilon(1e-14));
    }
}

TEST_CASE("field magnitude decays along rays") {
    const double y0 = 0.2;
    for (double angle : {0.3, 1.0, 2.0, 4.0, 5.5}) {
        const Vec3 dir{0.0, std::cos(angle), std::sin(angle)};
        for (double d : {0.5, 1.0, 2.0}) {
            if (d <= 2.0 * y0) continue;
            const Vec3 near = dir * d;
            const Vec3 far = dir * (2.0 * d);
            const double b_near = field_two_wire(near.y, near.z, y0, 31.0).norm();
            const double b_far = field_two_wire(far.y, far.z, y0, 31.0).norm();
            CHECK(b_far < b_near);
        }
    }
}

TEST_CASE("evaluation on a conductor is rejected") {
    CHECK_THROWS_AS(field_two_wire(0.2, 0.0, 0.2, 31.0), SingularPointError);
    CHECK_THROWS_AS(field_two_wire(0.2 + 5e-4, 0.0, 0.2, 31.0), SingularPointError);
    ConductorLayout layout = ConductorLayout::two_wire(0.2, 31.0);
    CHECK_THROWS_AS(field_multi_wire({0.0, -0.2, 5e-4}, layout), SingularPointError);
}

TEST_CASE("frame transform: identity and quarter turn") {
    const Vec3 v{0.0, 1e-6, 0.0};
    CHECK((to_global(v, {}) - v).norm() == 0.0);
    const Vec3 r = to_global(v, {M_PI / 2.0, 0.0, 0.0});
    CHECK(r.x == doctest::Approx(-1e-6));
    CHECK(r.y == doctest::Approx(0.0));
    CHECK(r.z == doctest::Approx(0.0));
}

TEST_CASE("frame transform round-trips") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int k = 0; k < 50; ++k) {
        const Attitude att{u(rng), u(rng) / 2.0, u(rng)};
        const Vec3 v{u(rng) * 1e-6, u(rng) * 1e-6, u(rng) * 1e-6};
        const Vec3 back = to_vehicle(to_global(v, att), att);
        CHECK((back - v).norm() <= 1e-12 * (v.norm() + 1e-12));
    }
}

TEST_CASE("rig validation") {
    SensorRig rig;
    rig.sensor_positions = {Vec3{0.18, 0.18, 0.04}, Vec3{-0.18, 0.18, -0.04},
                            Vec3{-0.18, -0.18, 0.04}, Vec3{0.18, -0.18, -0.04}};
    CHECK_NOTHROW(rig.validate());

    SensorRig dup = rig;
    dup.sensor_positions[1] = dup.sensor_positions[0];
    CHECK_THROWS_AS(dup.validate(), ConfigError);

    SensorRig flat = rig;  // all on one x-z line
    flat.sensor_positions = {Vec3{0.1, 0.0, 0.1}, Vec3{0.2, 0.1, 0.2}, Vec3{0.3, -0.2, 0.3},
                             Vec3{0.4, 0.3, 0.4}};
    CHECK_THROWS_AS(flat.validate(), ConfigError);
}
