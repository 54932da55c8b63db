#pragma once

#include <string>
#include <vector>

#include "magloc/logs.hpp"

namespace magloc {

struct ErrorStats {
    double rmse = 0.0;
    double median_abs = 0.0;
    double max_abs = 0.0;
};

struct EvaluationReport {
    std::size_t aligned_rows = 0;
    std::size_t skipped_rows = 0;  // failed solves or out-of-tolerance alignment
    ErrorStats y;
    ErrorStats z;
    ErrorStats yaw;   // rad, wrapped differences
    double residual_mean = 0.0;
    double residual_median = 0.0;
    double residual_max = 0.0;
};

struct AlignedRow {
    double t = 0.0;
    double y_est = 0.0, z_est = 0.0, yaw_est = 0.0;
    double y_true = 0.0, z_true = 0.0, yaw_true = 0.0;
};

/// Nearest-neighbor time alignment of pose estimates against ground truth,
/// with a tolerance of half the estimate spacing. Throws when the time
/// ranges do not overlap.
std::vector<AlignedRow> align_poses(const std::vector<PoseRow>& poses,
                                    const std::vector<TruthSample>& truth,
                                    std::size_t* skipped = nullptr);

EvaluationReport evaluate_poses(const std::vector<PoseRow>& poses,
                                const std::vector<TruthSample>& truth,
                                std::vector<AlignedRow>* table = nullptr);

/// Plot-ready CSVs: per-timestep components and the y-z path.
void write_components_csv(const std::string& path, const std::vector<AlignedRow>& rows);
void write_path_csv(const std::string& path, const std::vector<AlignedRow>& rows);

std::string report_to_json(const EvaluationReport& report);

}  // namespace magloc
