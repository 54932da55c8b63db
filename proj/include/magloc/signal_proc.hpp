#pragma once

#include <array>
#include <string>
#include <vector>

#include "magloc/exec.hpp"
#include "magloc/geometry.hpp"
#include "magloc/optimizer.hpp"

namespace magloc {

/// One magnetometer axis over one time window. Samples in tesla.
struct SampleWindow {
    std::vector<double> samples;
    double sample_interval = 0.002;  // s
    double start_time = 0.0;         // s
    int sensor = 0;
    int axis = 0;
};

/// Amplitude/DC/phase of the power-frequency component of one axis.
/// amplitude >= 0 and phase in (-pi, pi]; a negative fitted amplitude is
/// normalized by flipping its sign and advancing the phase by pi.
struct AcFit {
    double amplitude = 0.0;  // T
    double dc = 0.0;         // T
    double phase = 0.0;      // rad, at the window start
    double residual = 0.0;   // T^2, final sum of squared errors
    double frequency = 0.0;  // Hz
};

/// Signed 50/60 Hz amplitude vector of one sensor, vehicle frame, tesla.
struct PhasorReading {
    Vec3 b;
    double timestamp = 0.0;
};

using PhasorSet = std::array<PhasorReading, 4>;

struct FitConfig {
    OptimizerConfig opt = [] {
        OptimizerConfig c;
        c.max_iterations = 2000;
        c.x_tolerance = 1e-10;  // in normalized sample units
        c.f_tolerance = 1e-24;
        c.initial_simplex_scale = {0.1};
        return c;
    }();
};

/// Least-squares sinusoid fit at a known frequency, minimizing the summed
/// squared sample error with two Nelder-Mead runs from phase 0 and phase pi.
/// The window must span at least one full period.
AcFit fit_sinusoid(const SampleWindow& window, double frequency,
                   const FitConfig& config = {});

struct SignConfig {
    double noise_floor = 0.3e-6;  // T; components below it are emitted as 0
    double guard_band = 0.2;      // rad around +-pi/2 that raises an ambiguity
};

struct AxisId {
    int sensor = 0;
    int axis = 0;
};

using FitGrid = std::array<std::array<AcFit, 3>, 4>;  // [sensor][axis]

/// The axis with the largest fitted amplitude; used as the sign reference.
AxisId pick_reference(const FitGrid& fits);

/// Resolves the 12 per-axis fits into signed per-sensor vectors against one
/// reference axis: in-phase components are positive, antiphase negative.
/// Components below the noise floor are zeroed. A phase within the guard
/// band of +-pi/2 raises AmbiguousPhaseError.
PhasorSet resolve_signs(const FitGrid& fits, AxisId reference, double timestamp,
                        const SignConfig& config = {});

/// One row of the raw magnetometer log: time + 4 sensors x 3 axes, tesla.
struct RawSample {
    double t = 0.0;
    std::array<double, 12> b{};
};

/// Aligned samples of all 12 sensor-axes over one window.
struct WindowSet {
    double start_time = 0.0;
    double dt = 0.0;
    std::array<std::vector<double>, 12> samples;

    double center_time() const;
};

struct GapEvent {
    std::size_t row_index = 0;  // first row after the gap
    double t_before = 0.0;
    double t_after = 0.0;
};

struct WindowStream {
    std::vector<WindowSet> windows;
    std::vector<GapEvent> gaps;
    double nominal_dt = 0.0;
};

/// Slices a raw log into aligned fixed-length windows advancing by `hop`
/// samples. A timestamp jump above 3x the nominal interval is recorded as a
/// gap; buffered samples are dropped and windowing resumes after it.
WindowStream stream_windows(const std::vector<RawSample>& rows, int window_length, int hop);

struct ExtractionConfig {
    double frequency = 50.0;
    int window_length = 100;
    int hop = 50;
    FitConfig fit;
    SignConfig signs;
};

struct ExtractionIssue {
    double time = 0.0;
    std::string what;
};

struct ExtractionResult {
    std::vector<PhasorSet> phasors;  // one per surviving window
    std::vector<GapEvent> gaps;
    std::vector<ExtractionIssue> issues;  // windows skipped, e.g. ambiguous phase
};

/// Full extraction kernel: windowing, 12 sinusoid fits per window, sign
/// resolution. The parallel path fans the per-window fits across threads and
/// is output-identical to the serial reference.
ExtractionResult extract_phasors(const std::vector<RawSample>& rows,
                                 const ExtractionConfig& config,
                                 Execution mode = Execution::parallel);

}  // namespace magloc
