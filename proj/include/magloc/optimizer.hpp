#pragma once

#include <functional>
#include <span>
#include <vector>

namespace magloc {

struct OptimizerConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    int max_iterations = 500;
    double x_tolerance = 1e-10;  // simplex diameter, absolute
    double f_tolerance = 1e-15;  // best-to-worst spread, absolute
    // Per-dimension initial simplex step; a single entry broadcasts to all
    // dimensions.
    std::vector<double> initial_simplex_scale = {0.05};

    void validate() const;
    double scale_for(std::size_t dim) const;
};

struct OptimizationResult {
    std::vector<double> x_min;
    double f_min = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Standard reflect/expand/contract/shrink simplex minimization. The best
/// vertex value never increases, so f_min <= objective(start). Throws
/// NonFiniteObjectiveError when the objective produces a non-finite value.
OptimizationResult nelder_mead(const Objective& objective, std::span<const double> start,
                               const OptimizerConfig& config);

/// Runs nelder_mead from every start and returns the best result; ties go to
/// the lowest start index. A start whose objective fails is skipped unless
/// all of them fail.
OptimizationResult multi_start(const Objective& objective,
                               const std::vector<std::vector<double>>& starts,
                               const OptimizerConfig& config);

}  // namespace magloc
