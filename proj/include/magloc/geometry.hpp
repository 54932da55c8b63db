#pragma once

#include <array>
#include <cmath>

namespace magloc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this / norm(); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Row-major 3x3 matrix, just enough for frame rotations.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity();
    static Mat3 rot_x(double angle);
    static Mat3 rot_y(double angle);
    static Mat3 rot_z(double angle);

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Yaw/pitch/roll of the vehicle frame relative to the wire frame.
/// The rotation taking vehicle-frame vectors to wire-frame vectors is
/// composed as R_x(roll) * R_y(pitch) * R_z(yaw).
struct Attitude {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;

    Mat3 rotation() const;  // vehicle -> wire frame
    Attitude normalized() const {
        return {wrap_angle(yaw), wrap_angle(pitch), wrap_angle(roll)};
    }
};

}  // namespace magloc
