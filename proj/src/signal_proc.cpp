#include "magloc/signal_proc.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "magloc/errors.hpp"

namespace magloc {

namespace {

struct SinBasis {
    std::vector<double> c;
    std::vector<double> s;

    SinBasis(std::size_t n, double dt, double frequency) : c(n), s(n) {
        const double w = 2.0 * M_PI * frequency;
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = std::cos(w * dt * static_cast<double>(i));
            s[i] = std::sin(w * dt * static_cast<double>(i));
        }
    }
};

AcFit fit_with_basis(const std::vector<double>& samples, const SinBasis& basis,
                     double frequency, const FitConfig& config) {
    const std::size_t n = samples.size();
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);

    AcFit fit;
    fit.frequency = frequency;
    if (sd == 0.0) {
        fit.dc = mean;
        return fit;
    }

    // Fit on mean-removed, std-scaled samples; conditioning is then unit
    // scale for all three variables.
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = (samples[i] - mean) / sd;

    auto objective = [&](std::span<const double> p) {
        const double amp = p[0], dc = p[1];
        const double cp = std::cos(p[2]), sp = std::sin(p[2]);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double model = dc + amp * (cp * basis.c[i] - sp * basis.s[i]);
            const double e = g[i] - model;
            acc += e * e;
        }
        return acc;
    };

    const double a0 = std::sqrt(2.0);
    const std::vector<double> start1 = {a0, 0.0, 0.0};
    const std::vector<double> start2 = {a0, 0.0, M_PI};
    auto r1 = nelder_mead(objective, start1, config.opt);
    auto r2 = nelder_mead(objective, start2, config.opt);
    const auto& best = (r2.f_min < r1.f_min) ? r2 : r1;

    double amp = best.x_min[0] * sd;
    double phase = best.x_min[2];
    if (amp < 0.0) {
        amp = -amp;
        phase += M_PI;
    }
    fit.amplitude = amp;
    fit.dc = mean + best.x_min[1] * sd;
    fit.phase = wrap_angle(phase);
    fit.residual = best.f_min * sd * sd;
    return fit;
}

}  // namespace

AcFit fit_sinusoid(const SampleWindow& window, double frequency, const FitConfig& config) {
    if (window.samples.size() < 3) throw ConfigError("window needs at least 3 samples");
    if (!(window.sample_interval > 0.0)) throw ConfigError("sample interval must be > 0");
    if (!(frequency > 0.0)) throw ConfigError("frequency must be > 0");
    const double span = static_cast<double>(window.samples.size()) * window.sample_interval;
    if (span < 1.0 / frequency)
        throw WindowTooShortError("window spans less than one period of the target frequency");
    SinBasis basis(window.samples.size(), window.sample_interval, frequency);
    return fit_with_basis(window.samples, basis, frequency, config);
}

AxisId pick_reference(const FitGrid& fits) {
    AxisId ref{0, 0};
    double best = -1.0;
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a)
            if (fits[s][a].amplitude > best) {
                best = fits[s][a].amplitude;
                ref = {s, a};
            }
    return ref;
}

PhasorSet resolve_signs(const FitGrid& fits, AxisId reference, double timestamp,
                        const SignConfig& config) {
    PhasorSet out;
    const AcFit& ref = fits[reference.sensor][reference.axis];
    for (auto& r : out) r.timestamp = timestamp;
    if (ref.amplitude < config.noise_floor) {
        // Nothing above the floor anywhere: every component is zero.
        return out;
    }
    for (int s = 0; s < 4; ++s) {
        std::array<double, 3> comps{};
        for (int a = 0; a < 3; ++a) {
            const AcFit& f = fits[s][a];
            if (f.amplitude < config.noise_floor) {
                comps[a] = 0.0;
                continue;
            }
            const double dphi = wrap_angle(f.phase - ref.phase);
            if (std::abs(std::abs(dphi) - M_PI / 2.0) < config.guard_band)
                throw AmbiguousPhaseError("phase within the guard band of +-pi/2 for sensor " +
                                          std::to_string(s) + " axis " + std::to_string(a));
            comps[a] = (std::abs(dphi) < M_PI / 2.0) ? f.amplitude : -f.amplitude;
        }
        out[s].b = {comps[0], comps[1], comps[2]};
    }
    return out;
}

double WindowSet::center_time() const {
    const std::size_t n = samples[0].size();
    return start_time + 0.5 * dt * static_cast<double>(n > 0 ? n - 1 : 0);
}

WindowStream stream_windows(const std::vector<RawSample>& rows, int window_length, int hop) {
    if (window_length < 3) throw ConfigError("window length must be >= 3");
    if (hop < 1) throw ConfigError("hop must be >= 1");

    WindowStream out;
    if (rows.size() < 2) return out;

    // Nominal rate from the median timestamp increment.
    std::vector<double> deltas;
    deltas.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) deltas.push_back(rows[i].t - rows[i - 1].t);
    std::vector<double> sorted = deltas;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double dt = sorted[sorted.size() / 2];
    if (!(dt > 0.0)) throw ConfigError("raw log timestamps are not increasing");
    out.nominal_dt = dt;

    std::size_t segment_begin = 0;
    auto flush_segment = [&](std::size_t begin, std::size_t end) {
        const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(end) - static_cast<std::ptrdiff_t>(begin);
        for (std::ptrdiff_t start = 0; start + window_length <= count; start += hop) {
            WindowSet w;
            const std::size_t first = begin + static_cast<std::size_t>(start);
            w.start_time = rows[first].t;
            w.dt = dt;
            for (auto& v : w.samples) v.reserve(window_length);
            for (int k = 0; k < window_length; ++k)
                for (int ch = 0; ch < 12; ++ch)
                    w.samples[ch].push_back(rows[first + static_cast<std::size_t>(k)].b[ch]);
            out.windows.push_back(std::move(w));
        }
    };

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double step = rows[i].t - rows[i - 1].t;
        if (step > 3.0 * dt || step <= 0.0) {
            out.gaps.push_back({i, rows[i - 1].t, rows[i].t});
            flush_segment(segment_begin, i);
            segment_begin = i;
        }
    }
    flush_segment(segment_begin, rows.size());
    return out;
}

namespace {

struct WindowOutcome {
    bool ok = false;
    PhasorSet phasors;
    std::string issue;
    double time = 0.0;
};

WindowOutcome process_window(const WindowSet& w, const SinBasis& basis,
                             const ExtractionConfig& config) {
    WindowOutcome res;
    res.time = w.center_time();
    FitGrid fits;
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a)
            fits[s][a] = fit_with_basis(w.samples[s * 3 + a], basis, config.frequency, config.fit);
    try {
        res.phasors = resolve_signs(fits, pick_reference(fits), res.time, config.signs);
        res.ok = true;
    } catch (const AmbiguousPhaseError& e) {
        res.issue = e.what();
    }
    return res;
}

}  // namespace

ExtractionResult extract_phasors(const std::vector<RawSample>& rows,
                                 const ExtractionConfig& config, Execution mode) {
    if (!(config.frequency > 0.0)) throw ConfigError("frequency must be > 0");

    WindowStream stream = stream_windows(rows, config.window_length, config.hop);
    ExtractionResult out;
    out.gaps = std::move(stream.gaps);
    if (stream.windows.empty()) return out;
    if (config.window_length * stream.nominal_dt < 1.0 / config.frequency)
        throw WindowTooShortError("window spans less than one period of the target frequency");

    const SinBasis basis(static_cast<std::size_t>(config.window_length), stream.nominal_dt,
                         config.frequency);
    std::vector<WindowOutcome> results(stream.windows.size());
    if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(stream.windows.size()); ++i)
            results[i] = process_window(stream.windows[i], basis, config);
    } else {
        for (std::size_t i = 0; i < stream.windows.size(); ++i)
            results[i] = process_window(stream.windows[i], basis, config);
    }

    for (auto& r : results) {
        if (r.ok)
            out.phasors.push_back(r.phasors);
        else
            out.issues.push_back({r.time, std::move(r.issue)});
    }
    return out;
}

}  // namespace magloc
