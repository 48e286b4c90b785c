#pragma once

#include <cstdint>
#include <vector>

#include <dvfs/power_model.hpp>
#include <dvfs/schedule.hpp>
#include <dvfs/task_graph.hpp>

namespace dvfs::test {

// Processor of the two-level comparison example: P_d = 1.367e-24 * f^3,
// levels 50 and 60 MHz, no idle power.
inline ProcessorModel example_processor() {
    const CubicFit fit{1.367e-24, 0.0};
    std::vector<FrequencyLevel> levels{
        {50 * mhz, 1.0, fit.power_at(50 * mhz)},
        {60 * mhz, 1.1, fit.power_at(60 * mhz)},
    };
    return ProcessorModel("example-2level", std::move(levels), 0.0, fit);
}

// Same law with a third level at 80 MHz.
inline ProcessorModel example_processor_3level() {
    const CubicFit fit{1.367e-24, 0.0};
    std::vector<FrequencyLevel> levels{
        {50 * mhz, 1.0, fit.power_at(50 * mhz)},
        {60 * mhz, 1.1, fit.power_at(60 * mhz)},
        {80 * mhz, 1.2, fit.power_at(80 * mhz)},
    };
    return ProcessorModel("example-3level", std::move(levels), 0.0, fit);
}

// The worked example's task: K = 7e6 cycles, t_OS = 70 ms, T = 130 ms.
inline SlackWindow example_window() {
    SlackWindow w;
    w.task_id = 0;
    w.cycles = 7'000'000;
    w.exec_s = 7e6 / 60e6;
    w.window_s = 0.130;
    return w;
}

// Deterministic random slack windows for sweeps. stretch_max is relative to
// t_OS; values beyond f_max/f_min push f_ideal below f_min.
inline std::vector<SlackWindow> random_windows(const ProcessorModel& model, int count,
                                               std::uint64_t seed, double stretch_max = 0.0) {
    if (stretch_max <= 0.0)
        stretch_max = model.f_max() / model.f_min();
    detail::Rng rng(seed);
    std::vector<SlackWindow> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        SlackWindow w;
        w.task_id = i;
        w.cycles = rng.uniform_u64(5'000'000, 10'000'000);
        w.exec_s = static_cast<double>(w.cycles) / model.f_max();
        w.window_s = w.exec_s * rng.uniform(1.0, stretch_max);
        out.push_back(w);
    }
    return out;
}

} // namespace dvfs::test
