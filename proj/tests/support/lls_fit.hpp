#pragma once

// Closed-form least-squares sinusoid fit on the basis {1, cos wt, sin wt}.
// Test-only oracle: solves the same criterion as the Nelder-Mead fit but
// through the normal equations, sharing no code with the implementation.

#include <array>
#include <cmath>
#include <vector>

namespace magloc::testing {

struct LlsFit {
    double amplitude;
    double dc;
    double phase;
};

inline LlsFit lls_sinusoid(const std::vector<double>& samples, double dt, double frequency) {
    const double w = 2.0 * M_PI * frequency;
    // Normal equations for [dc, a, b] with model dc + a*cos + b*sin.
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = dt * static_cast<double>(i);
        const std::array<double, 3> basis = {1.0, std::cos(w * t), std::sin(w * t)};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += basis[r] * samples[i];
            for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::array<int, 3> piv = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[piv[r]][col]) > std::abs(m[piv[best]][col])) best = r;
        std::swap(piv[col], piv[best]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[piv[r]][col] / m[piv[col]][col];
            for (int c = col; c < 3; ++c) m[piv[r]][c] -= f * m[piv[col]][c];
            rhs[piv[r]] -= f * rhs[piv[col]];
        }
    }
    std::array<double, 3> x{};
    for (int col = 2; col >= 0; --col) {
        double acc = rhs[piv[col]];
        for (int c = col + 1; c < 3; ++c) acc -= m[piv[col]][c] * x[c];
        x[col] = acc / m[piv[col]][col];
    }

    // dc + a cos + b sin = dc + A cos(wt + phi) with A cos phi = a,
    // A sin phi = -b.
    LlsFit fit;
    fit.dc = x[0];
    fit.amplitude = std::hypot(x[1], x[2]);
    fit.phase = std::atan2(-x[2], x[1]);
    return fit;
}

}  // namespace magloc::testing
