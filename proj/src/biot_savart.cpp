#include "magloc/biot_savart.hpp"

#include <cmath>
#include <cstddef>

#include "magloc/errors.hpp"

namespace magloc {

Vec3 segment_field(const Vec3& point, const Vec3& anchor, const Vec3& direction,
                   double current, const SegmentQuadrature& quad) {
    const Vec3 v = direction.normalized();
    const Vec3 rel = point - anchor;
    const double s_foot = rel.dot(v);
    const double d = (rel - v * s_foot).norm();
    if (d < k_singularity_radius)
        throw SingularPointError("quadrature point lies on the segment axis");

    // Substitute s = s_foot + d*tan(u): equal steps in u concentrate nodes
    // near the closest point, where the integrand peaks.
    const double L = quad.half_length;
    const int n = (quad.steps % 2 == 0) ? quad.steps : quad.steps + 1;
    const double u_lo = std::atan((-L - s_foot) / d);
    const double u_hi = std::atan((L - s_foot) / d);
    const double du = (u_hi - u_lo) / n;

    const double scale = k_mu0 * current / (4.0 * M_PI);
    Vec3 acc;
    for (int k = 0; k <= n; ++k) {
        const double u = u_lo + du * k;
        const double cu = std::cos(u);
        const double s = s_foot + d * std::tan(u);
        const Vec3 r = point - (anchor + v * s);
        const double rn = r.norm();
        const Vec3 integrand = v.cross(r) / (rn * rn * rn);
        const double jac = d / (cu * cu);  // ds/du
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += integrand * (w * jac);
    }
    return acc * (scale * du / 3.0);
}

Vec3 layout_segment_field(const Vec3& point, const ConductorLayout& layout,
                          const SegmentQuadrature& quad) {
    layout.validate();
    Vec3 b;
    for (const auto& wire : layout.conductors) {
        const Vec3 anchor{0.0, wire.offset_y, wire.offset_z};
        b += segment_field(point, anchor, {1.0, 0.0, 0.0}, wire.current, quad);
    }
    return b;
}

std::vector<Vec3> layout_segment_field_batch(const std::vector<Vec3>& points,
                                             const ConductorLayout& layout,
                                             const SegmentQuadrature& quad,
                                             Execution mode) {
    std::vector<Vec3> out(points.size());
    if (mode == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i)
            out[i] = layout_segment_field(points[i], layout, quad);
    } else {
        for (std::size_t i = 0; i < points.size(); ++i)
            out[i] = layout_segment_field(points[i], layout, quad);
    }
    return out;
}

}  // namespace magloc
