#include "magloc/geometry.hpp"

namespace magloc {

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {1, 0, 0,
           0, c, -s,
           0, s, c};
    return r;
}

Mat3 Mat3::rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {c, 0, s,
           0, 1, 0,
           -s, 0, c};
    return r;
}

Mat3 Mat3::rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {c, -s, 0,
           s, c, 0,
           0, 0, 1};
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m[i * 3 + k] * o.m[k * 3 + j];
            r.m[i * 3 + j] = acc;
        }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i * 3 + j] = m[j * 3 + i];
    return r;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

Mat3 Attitude::rotation() const {
    return Mat3::rot_x(roll) * Mat3::rot_y(pitch) * Mat3::rot_z(yaw);
}

}  // namespace magloc
