// Benchmark of the parallel kernels against their serial reference
// implementations: phasor extraction over a synthetic log and batch
// finite-segment field evaluation. Also verifies that both paths produce
// identical output.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "magloc/biot_savart.hpp"
#include "magloc/scenario.hpp"
#include "magloc/signal_proc.hpp"
#include "magloc/simulator.hpp"

using namespace magloc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_phasors(const ExtractionResult& a, const ExtractionResult& b) {
    if (a.phasors.size() != b.phasors.size()) return false;
    for (std::size_t i = 0; i < a.phasors.size(); ++i)
        for (int s = 0; s < 4; ++s)
            if (a.phasors[i][s].b.x != b.phasors[i][s].b.x ||
                a.phasors[i][s].b.y != b.phasors[i][s].b.y ||
                a.phasors[i][s].b.z != b.phasors[i][s].b.z)
                return false;
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP: %d threads\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled, parallel path runs serially\n");
#endif

    // Extraction workload: the 30 s noisy hover of the motor preset.
    Scenario sc = preset("noisy-motor");
    const auto sim = simulate(sc.trajectory, sc.rig, sc.layout, sc.noise, sc.sampling);
    std::printf("extraction workload: %zu samples\n", sim.raw.size());

    ExtractionConfig cfg;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = extract_phasors(sim.raw, cfg, Execution::serial);
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto parallel = extract_phasors(sim.raw, cfg, Execution::parallel);
    const double t_parallel = seconds_since(t0);
    std::printf("extract serial   : %.3f s (%zu windows)\n", t_serial, serial.phasors.size());
    std::printf("extract parallel : %.3f s  speedup %.2fx  outputs %s\n", t_parallel,
                t_serial / t_parallel, same_phasors(serial, parallel) ? "identical" : "DIFFER");

    // Quadrature workload: batch field evaluation on a grid.
    const auto layout = ConductorLayout::two_wire(0.2, 31.0);
    std::vector<Vec3> points;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    while (points.size() < 2000) {
        const Vec3 p{0.0, u(rng), u(rng)};
        if (std::hypot(p.y - 0.2, p.z) < 0.05 || std::hypot(p.y + 0.2, p.z) < 0.05) continue;
        points.push_back(p);
    }
    t0 = std::chrono::steady_clock::now();
    const auto qs = layout_segment_field_batch(points, layout, {}, Execution::serial);
    const double q_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto qp = layout_segment_field_batch(points, layout, {}, Execution::parallel);
    const double q_parallel = seconds_since(t0);
    bool same = qs.size() == qp.size();
    for (std::size_t i = 0; same && i < qs.size(); ++i)
        same = qs[i].x == qp[i].x && qs[i].y == qp[i].y && qs[i].z == qp[i].z;
    std::printf("quadrature serial   : %.3f s (%zu points)\n", q_serial, points.size());
    std::printf("quadrature parallel : %.3f s  speedup %.2fx  outputs %s\n", q_parallel,
                q_serial / q_parallel, same ? "identical" : "DIFFER");
    return 0;
}
