#include <doctest.h>

#include <random>

#include "magloc/biot_savart.hpp"
#include "magloc/errors.hpp"
#include "magloc/field_model.hpp"

using namespace magloc;

TEST_CASE("quadrature matches the frozen field value to 6 significant digits") {
    const auto layout = ConductorLayout::two_wire(0.2, 31.0);
    const Vec3 numeric = layout_segment_field({0.0, 0.0, -1.0}, layout, {});
    const Vec3 closed = field_two_wire(0.0, -1.0, 0.2, 31.0);
    CHECK(numeric.y == doctest::Approx(closed.y).epsilon(1e-6));
    CHECK(std::abs(numeric.x) < 1e-12 * closed.norm());
    CHECK(std::abs(numeric.z) < 1e-9 * closed.norm());
}

TEST_CASE("closed form matches the segment integral near the wires") {
    const auto layout = ConductorLayout::two_wire(0.2, 31.0);
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int tested = 0;
    while (tested < 100) {
        const double y = u(rng), z = u(rng);
        const double d0 = std::hypot(y + 0.2, z), d1 = std::hypot(y - 0.2, z);
        if (std::min(d0, d1) < 0.05) continue;
        const Vec3 closed = field_two_wire(y, z, 0.2, 31.0);
        const Vec3 numeric = layout_segment_field({0.0, y, z}, layout, {});
        CHECK((closed - numeric).norm() <= 1e-5 * numeric.norm());
        ++tested;
    }
}

TEST_CASE("batch evaluation: parallel path equals the serial reference") {
    const auto layout = ConductorLayout::two_wire(0.2, 31.0);
    std::vector<Vec3> points;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    while (points.size() < 64) {
        const Vec3 p{0.0, u(rng), u(rng)};
        if (std::hypot(p.y - 0.2, p.z) < 0.05 || std::hypot(p.y + 0.2, p.z) < 0.05) continue;
        points.push_back(p);
    }
    const auto serial = layout_segment_field_batch(points, layout, {}, Execution::serial);
    const auto parallel = layout_segment_field_batch(points, layout, {}, Execution::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].x == parallel[i].x);
        CHECK(serial[i].y == parallel[i].y);
        CHECK(serial[i].z == parallel[i].z);
    }
}

TEST_CASE("point on the segment axis is rejected") {
    CHECK_THROWS_AS(segment_field({5.0, 0.0, 0.0}, {0, 0, 0}, {1, 0, 0}, 31.0, {}),
                    SingularPointError);
}
