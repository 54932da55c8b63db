#include "magloc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magloc/errors.hpp"

namespace magloc {

void OptimizerConfig::validate() const {
    if (!(reflection > 0.0)) throw ConfigError("reflection coefficient must be > 0");
    if (!(expansion > 1.0)) throw ConfigError("expansion coefficient must be > 1");
    if (!(contraction > 0.0 && contraction < 1.0))
        throw ConfigError("contraction coefficient must be in (0, 1)");
    if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("shrink coefficient must be in (0, 1)");
    if (!(x_tolerance > 0.0) || !(f_tolerance > 0.0))
        throw ConfigError("tolerances must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (initial_simplex_scale.empty()) throw ConfigError("initial_simplex_scale is empty");
}

double OptimizerConfig::scale_for(std::size_t dim) const {
    if (initial_simplex_scale.size() == 1) return initial_simplex_scale[0];
    return initial_simplex_scale.at(dim);
}

namespace {

double checked_eval(const Objective& objective, const std::vector<double>& x) {
    const double f = objective(x);
    if (!std::isfinite(f)) throw NonFiniteObjectiveError("objective returned a non-finite value");
    return f;
}

double simplex_diameter(const std::vector<std::vector<double>>& verts) {
    double d = 0.0;
    for (std::size_t i = 1; i < verts.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < verts[0].size(); ++k) {
            const double dd = verts[i][k] - verts[0][k];
            s += dd * dd;
        }
        d = std::max(d, std::sqrt(s));
    }
    return d;
}

}  // namespace

OptimizationResult nelder_mead(const Objective& objective, std::span<const double> start,
                               const OptimizerConfig& config) {
    config.validate();
    const std::size_t n = start.size();
    if (n < 1) throw ConfigError("nelder_mead needs at least one variable");

    std::vector<std::vector<double>> verts;
    std::vector<double> fvals;
    verts.reserve(n + 1);
    verts.emplace_back(start.begin(), start.end());
    for (std::size_t d = 0; d < n; ++d) {
        auto v = verts[0];
        v[d] += config.scale_for(d);
        verts.push_back(std::move(v));
    }
    for (const auto& v : verts) fvals.push_back(checked_eval(objective, v));

    std::vector<std::size_t> order(n + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    };

    int iter = 0;
    bool converged = false;
    for (; iter < config.max_iterations; ++iter) {
        sort_vertices();
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        if (simplex_diameter(verts) < config.x_tolerance ||
            std::abs(fvals[worst] - fvals[best]) < config.f_tolerance) {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += verts[i][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; ++k)
                p[k] = centroid[k] + t * (centroid[k] - verts[worst][k]);
            return p;
        };

        auto reflected = blend(config.reflection);
        const double f_reflected = checked_eval(objective, reflected);

        if (f_reflected < fvals[best]) {
            auto expanded = blend(config.reflection * config.expansion);
            const double f_expanded = checked_eval(objective, expanded);
            if (f_expanded < f_reflected) {
                verts[worst] = std::move(expanded);
                fvals[worst] = f_expanded;
            } else {
                verts[worst] = std::move(reflected);
                fvals[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fvals[second_worst]) {
            verts[worst] = std::move(reflected);
            fvals[worst] = f_reflected;
            continue;
        }

        // Contract, outside or inside depending on the reflected value.
        const bool outside = f_reflected < fvals[worst];
        auto contracted = blend(outside ? config.reflection * config.contraction
                                        : -config.contraction);
        const double f_contracted = checked_eval(objective, contracted);
        if (f_contracted < std::min(f_reflected, fvals[worst])) {
            verts[worst] = std::move(contracted);
            fvals[worst] = f_contracted;
            continue;
        }

        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k)
                verts[i][k] = verts[best][k] + config.shrink * (verts[i][k] - verts[best][k]);
            fvals[i] = checked_eval(objective, verts[i]);
        }
    }

    sort_vertices();
    OptimizationResult result;
    result.x_min = verts[order[0]];
    result.f_min = fvals[order[0]];
    result.iterations = iter;
    result.converged = converged;
    return result;
}

OptimizationResult multi_start(const Objective& objective,
                               const std::vector<std::vector<double>>& starts,
                               const OptimizerConfig& config) {
    if (starts.empty()) throw ConfigError("multi_start needs at least one start");
    bool have_result = false;
    OptimizationResult best;
    std::string last_error;
    for (const auto& start : starts) {
        OptimizationResult r;
        try {
            r = nelder_mead(objective, start, config);
        } catch (const NumericError& e) {
            last_error = e.what();
            continue;
        }
        if (!have_result || r.f_min < best.f_min) {
            best = std::move(r);
            have_result = true;
        }
    }
    if (!have_result)
        throw NonFiniteObjectiveError("all starts failed: " + last_error);
    return best;
}

}  // namespace magloc
