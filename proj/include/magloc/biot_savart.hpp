#pragma once

#include <vector>

#include "magloc/exec.hpp"
#include "magloc/field_model.hpp"
#include "magloc/geometry.hpp"

namespace magloc {

// Direct numerical integration of the Biot-Savart law over finite straight
// segments. This is the independent route against which the closed-form
// infinite-line model is checked; it deliberately shares no code with
// field_model. It also serves as an alternative simulator field generator to
// quantify the infinite-line approximation at lab scale.

struct SegmentQuadrature {
    double half_length = 1e4;  // segment runs [-L, +L] along the wire, m
    int steps = 4000;          // Simpson subintervals (forced even)
};

/// Field of one finite straight segment centered on `anchor` with unit
/// `direction`, carrying `current`. Composite Simpson on a tangent-stretched
/// grid concentrated around the closest point of the wire.
Vec3 segment_field(const Vec3& point, const Vec3& anchor, const Vec3& direction,
                   double current, const SegmentQuadrature& quad);

/// Superposition of segment_field over a layout (wires along wire-frame x).
Vec3 layout_segment_field(const Vec3& point, const ConductorLayout& layout,
                          const SegmentQuadrature& quad);

/// Batch evaluation over many points; the parallel path distributes points
/// across threads and writes by index, so output matches the serial path
/// exactly.
std::vector<Vec3> layout_segment_field_batch(const std::vector<Vec3>& points,
                                             const ConductorLayout& layout,
                                             const SegmentQuadrature& quad,
                                             Execution mode = Execution::parallel);

}  // namespace magloc
