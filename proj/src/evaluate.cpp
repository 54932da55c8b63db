#include "magloc/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "magloc/errors.hpp"
#include "magloc/geometry.hpp"

namespace magloc {

namespace {

ErrorStats stats_of(std::vector<double> abs_errors, double sum_sq) {
    ErrorStats s;
    if (abs_errors.empty()) return s;
    s.rmse = std::sqrt(sum_sq / static_cast<double>(abs_errors.size()));
    s.max_abs = *std::max_element(abs_errors.begin(), abs_errors.end());
    std::nth_element(abs_errors.begin(), abs_errors.begin() + abs_errors.size() / 2,
                     abs_errors.end());
    s.median_abs = abs_errors[abs_errors.size() / 2];
    return s;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

}  // namespace

std::vector<AlignedRow> align_poses(const std::vector<PoseRow>& poses,
                                    const std::vector<TruthSample>& truth,
                                    std::size_t* skipped) {
    if (poses.empty() || truth.empty())
        throw ConfigError("evaluation needs non-empty pose and truth logs");
    if (poses.back().t < truth.front().t || poses.front().t > truth.back().t)
        throw ConfigError("pose and truth logs cover disjoint time ranges");

    // Alignment tolerance: half the median estimate spacing (falls back to
    // half the truth spacing for single-row pose logs).
    double spacing;
    if (poses.size() > 1) {
        std::vector<double> deltas;
        for (std::size_t i = 1; i < poses.size(); ++i) deltas.push_back(poses[i].t - poses[i - 1].t);
        spacing = median_of(deltas);
    } else {
        spacing = truth.size() > 1 ? truth[1].t - truth[0].t : 1.0;
    }
    const double tol = 0.5 * std::abs(spacing);

    std::vector<AlignedRow> out;
    std::size_t skip_count = 0;
    std::size_t j = 0;
    for (const auto& p : poses) {
        if (!p.valid()) {
            ++skip_count;
            continue;
        }
        while (j + 1 < truth.size() &&
               std::abs(truth[j + 1].t - p.t) <= std::abs(truth[j].t - p.t))
            ++j;
        if (std::abs(truth[j].t - p.t) > tol) {
            ++skip_count;
            continue;
        }
        out.push_back({p.t, p.y, p.z, p.yaw, truth[j].y, truth[j].z, truth[j].yaw});
    }
    if (skipped != nullptr) *skipped = skip_count;
    return out;
}

EvaluationReport evaluate_poses(const std::vector<PoseRow>& poses,
                                const std::vector<TruthSample>& truth,
                                std::vector<AlignedRow>* table) {
    EvaluationReport rep;
    auto rows = align_poses(poses, truth, &rep.skipped_rows);
    rep.aligned_rows = rows.size();

    std::vector<double> ey, ez, eyaw;
    double sy = 0.0, sz = 0.0, syaw = 0.0;
    for (const auto& r : rows) {
        const double dy = r.y_est - r.y_true;
        const double dz = r.z_est - r.z_true;
        const double dyaw = wrap_angle(r.yaw_est - r.yaw_true);
        ey.push_back(std::abs(dy));
        ez.push_back(std::abs(dz));
        eyaw.push_back(std::abs(dyaw));
        sy += dy * dy;
        sz += dz * dz;
        syaw += dyaw * dyaw;
    }
    rep.y = stats_of(std::move(ey), sy);
    rep.z = stats_of(std::move(ez), sz);
    rep.yaw = stats_of(std::move(eyaw), syaw);

    std::vector<double> residuals;
    for (const auto& p : poses)
        if (p.valid() && std::isfinite(p.residual)) residuals.push_back(p.residual);
    if (!residuals.empty()) {
        double sum = 0.0;
        for (double r : residuals) sum += r;
        rep.residual_mean = sum / static_cast<double>(residuals.size());
        rep.residual_max = *std::max_element(residuals.begin(), residuals.end());
        rep.residual_median = median_of(residuals);
    }

    if (table != nullptr) *table = std::move(rows);
    return rep;
}

void write_components_csv(const std::string& path, const std::vector<AlignedRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "t_s,y_est,y_truth,z_est,z_truth,yaw_est,yaw_truth\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.t << ',' << r.y_est << ',' << r.y_true << ',' << r.z_est << ',' << r.z_true
            << ',' << r.yaw_est << ',' << r.yaw_true << '\n';
}

void write_path_csv(const std::string& path, const std::vector<AlignedRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "y_est,z_est,y_truth,z_truth\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.y_est << ',' << r.z_est << ',' << r.y_true << ',' << r.z_true << '\n';
}

std::string report_to_json(const EvaluationReport& rep) {
    nlohmann::json j;
    j["aligned_rows"] = rep.aligned_rows;
    j["skipped_rows"] = rep.skipped_rows;
    auto stats = [](const ErrorStats& s) {
        return nlohmann::json{{"rmse", s.rmse}, {"median_abs", s.median_abs}, {"max_abs", s.max_abs}};
    };
    j["y_m"] = stats(rep.y);
    j["z_m"] = stats(rep.z);
    j["yaw_rad"] = stats(rep.yaw);
    j["residual"] = {{"mean", rep.residual_mean},
                     {"median", rep.residual_median},
                     {"max", rep.residual_max}};
    return j.dump(2);
}

}  // namespace magloc
