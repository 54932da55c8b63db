#pragma once

namespace magloc {

/// Execution mode for the data-parallel kernels. The serial path is the
/// reference implementation; the parallel path must produce identical output.
enum class Execution { serial, parallel };

}  // namespace magloc
