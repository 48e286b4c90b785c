#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <dvfs/errors.hpp>
#include <dvfs/power_model.hpp>
#include <dvfs/schedule.hpp>

namespace dvfs {

enum class Algorithm { Original, RDVFS, MMF, MFS, MVFS, SMFS, ContinuousBound };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::Original: return "original";
    case Algorithm::RDVFS: return "rdvfs";
    case Algorithm::MMF: return "mmf";
    case Algorithm::MFS: return "mfs";
    case Algorithm::MVFS: return "mvfs";
    case Algorithm::SMFS: return "smfs";
    case Algorithm::ContinuousBound: return "continuous";
    }
    return "?";
}

inline Algorithm algorithm_from_name(const std::string& s) {
    if (s == "original") return Algorithm::Original;
    if (s == "rdvfs") return Algorithm::RDVFS;
    if (s == "mmf") return Algorithm::MMF;
    if (s == "mfs") return Algorithm::MFS;
    if (s == "mvfs") return Algorithm::MVFS;
    if (s == "smfs") return Algorithm::SMFS;
    if (s == "continuous") return Algorithm::ContinuousBound;
    throw validation_error("unknown algorithm '" + s + "'");
}

// One stretch of execution at a fixed frequency. level_index is -1 for the
// fictitious continuous-frequency segment of the analytic bound.
struct Segment {
    int level_index = 0;
    double hz = 0.0;
    double duration_s = 0.0;
};

struct ReclaimPlan {
    TaskId task_id = 0;
    Algorithm algorithm = Algorithm::Original;
    std::vector<Segment> segments;
    double idle_s = 0.0;
    double energy_j = 0.0;
    bool degenerate = false; // f_ideal outside [f_min, f_max] or guard fallback
};

enum class IdealRelation { BelowMin, Interior, AboveMax, ExactLevel };

struct IdealFrequency {
    double hz = 0.0;
    IdealRelation relation = IdealRelation::Interior;
    int exact_level = -1;
};

inline constexpr double kCycleTol = 1e-9;      // relative, cycle conservation
inline constexpr double kExactLevelTol = 1e-12; // relative, exact-level detection

// f_ideal = K / T, the continuous frequency that exactly fills the window.
inline IdealFrequency ideal_frequency(const SlackWindow& window, const ProcessorModel& model) {
    if (!(window.window_s > 0.0))
        throw validation_error("ideal_frequency: window must be positive");
    IdealFrequency out;
    out.hz = static_cast<double>(window.cycles) / window.window_s;
    for (std::size_t i = 0; i < model.n_levels(); ++i) {
        const double f = model.level(i).hz;
        if (std::abs(out.hz - f) <= kExactLevelTol * f) {
            out.relation = IdealRelation::ExactLevel;
            out.exact_level = static_cast<int>(i);
            return out;
        }
    }
    if (out.hz < model.f_min())
        out.relation = IdealRelation::BelowMin;
    else if (out.hz > model.f_max())
        out.relation = IdealRelation::AboveMax;
    else
        out.relation = IdealRelation::Interior;
    return out;
}

inline double segment_power(const Segment& seg, const ProcessorModel& model) {
    if (seg.level_index >= 0)
        return model.active_power(static_cast<std::size_t>(seg.level_index));
    return model.fit().power_at(seg.hz);
}

// Energy of a plan per the window it reclaims: active segments at their
// level's power plus the idle remainder at idle power. Verifies cycle
// conservation and window containment first.
inline double plan_energy(const ReclaimPlan& plan, const SlackWindow& window,
                          const ProcessorModel& model) {
    double active_t = 0.0, cycles = 0.0, energy = 0.0;
    for (const auto& seg : plan.segments) {
        if (seg.duration_s < 0.0)
            throw integrity_error("plan has a negative-duration segment");
        active_t += seg.duration_s;
        cycles += seg.hz * seg.duration_s;
        energy += segment_power(seg, model) * seg.duration_s;
    }
    const double k = static_cast<double>(window.cycles);
    if (std::abs(cycles - k) > kCycleTol * std::max(k, 1.0))
        throw integrity_error("plan violates cycle conservation for task " +
                              std::to_string(plan.task_id));
    if (active_t > window.window_s * (1.0 + kCycleTol))
        throw integrity_error("plan exceeds its slack window for task " +
                              std::to_string(plan.task_id));
    return energy + model.idle_power() * std::max(window.window_s - active_t, 0.0);
}

namespace detail {

inline ReclaimPlan finish_plan(TaskId task, Algorithm algo, std::vector<Segment> segments,
                               const SlackWindow& window, const ProcessorModel& model,
                               bool degenerate = false) {
    ReclaimPlan plan;
    plan.task_id = task;
    plan.algorithm = algo;
    std::erase_if(segments, [](const Segment& s) { return s.duration_s <= 0.0; });
    plan.segments = std::move(segments);
    double active = 0.0;
    for (const auto& s : plan.segments)
        active += s.duration_s;
    plan.idle_s = std::max(window.window_s - active, 0.0);
    plan.degenerate = degenerate;
    plan.energy_j = plan_energy(plan, window, model);
    return plan;
}

inline Segment level_segment(const ProcessorModel& model, std::size_t level, double duration) {
    return Segment{static_cast<int>(level), model.level(level).hz, duration};
}

// Durations of the full-window two-frequency solution with f_lo <= K/T <= f_hi.
struct PairTimes {
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool feasible = false;
};

inline PairTimes pair_times(double f_lo, double f_hi, double k, double t_window) {
    PairTimes out;
    if (!(f_hi > f_lo))
        return out;
    out.t_lo = (t_window * f_hi - k) / (f_hi - f_lo);
    out.t_hi = (k - t_window * f_lo) / (f_hi - f_lo);
    const double eps = kCycleTol * t_window;
    if (out.t_lo < -eps || out.t_hi < -eps)
        return out;
    out.t_lo = std::max(out.t_lo, 0.0);
    out.t_hi = std::max(out.t_hi, 0.0);
    out.feasible = true;
    return out;
}

} // namespace detail

// Plan for the original schedule: the window's cycles at f_max, idle rest.
inline ReclaimPlan original_plan(const SlackWindow& window, const ProcessorModel& model) {
    const std::size_t top = model.n_levels() - 1;
    const double t = static_cast<double>(window.cycles) / model.f_max();
    return detail::finish_plan(window.task_id, Algorithm::Original,
                               {detail::level_segment(model, top, t)}, window, model);
}

// Analytic lower bound: one fictitious segment at f_ideal over the whole
// window, energy from the cubic law. Not executable on discrete hardware.
inline ReclaimPlan continuous_bound(const SlackWindow& window, const ProcessorModel& model) {
    const auto fid = ideal_frequency(window, model);
    double hz = fid.hz;
    if (fid.relation == IdealRelation::AboveMax)
        hz = model.f_max(); // cannot occur for windows with window >= exec
    ReclaimPlan plan;
    plan.task_id = window.task_id;
    plan.algorithm = Algorithm::ContinuousBound;
    plan.segments = {Segment{-1, hz, window.window_s}};
    plan.idle_s = 0.0;
    plan.degenerate = fid.relation == IdealRelation::AboveMax;
    plan.energy_j = plan_energy(plan, window, model);
    return plan;
}

// Baseline: run the task at the single smallest level frequency >= f_ideal.
inline ReclaimPlan rdvfs(const SlackWindow& window, const ProcessorModel& model) {
    const auto fid = ideal_frequency(window, model);
    std::size_t level;
    bool degenerate = false;
    switch (fid.relation) {
    case IdealRelation::ExactLevel: level = static_cast<std::size_t>(fid.exact_level); break;
    case IdealRelation::BelowMin:
        level = 0;
        degenerate = true;
        break;
    case IdealRelation::AboveMax:
        level = model.n_levels() - 1;
        degenerate = true;
        break;
    default: level = model.lowest_level_at_or_above(fid.hz); break;
    }
    const double t = static_cast<double>(window.cycles) / model.level(level).hz;
    return detail::finish_plan(window.task_id, Algorithm::RDVFS,
                               {detail::level_segment(model, level, t)}, window, model, degenerate);
}

// Mix of f_max and f_min covering the whole window. Falls back to the RDVFS
// plan when the eligibility inequality rejects the task or the candidate is
// not actually cheaper.
inline ReclaimPlan mmf_dvfs(const SlackWindow& window, const ProcessorModel& model) {
    ReclaimPlan rd = rdvfs(window, model);
    rd.algorithm = Algorithm::MMF;

    const auto fid = ideal_frequency(window, model);
    if (fid.relation == IdealRelation::BelowMin || fid.relation == IdealRelation::AboveMax)
        return rd;

    const double k = static_cast<double>(window.cycles);
    const double t_window = window.window_s;
    const double f_max = model.f_max();
    const double f_min = model.f_min();
    const double f_rd = rd.segments.front().hz;
    const double t_rd = rd.segments.front().duration_s;
    if (t_rd >= t_window * (1.0 - kCycleTol)) // no slack left to trade
        return rd;

    // Eligibility inequality, with idle power normalized by the cubic
    // coefficient so its units match the f^2 terms.
    const double p_norm = model.idle_power() / model.fit().alpha_w_per_hz3;
    const double numer =
        (f_max * f_max + f_max * f_min + p_norm / f_min) * (f_min / f_rd) * t_window;
    const double denom =
        (f_max * f_max + f_max * f_min + f_min * f_min - f_rd * f_rd) + p_norm / f_rd;
    const bool eligible = denom > 0.0 && t_rd <= numer / denom;
    if (!eligible)
        return rd;

    const auto times = detail::pair_times(f_min, f_max, k, t_window);
    if (!times.feasible)
        return rd;
    ReclaimPlan cand = detail::finish_plan(
        window.task_id, Algorithm::MMF,
        {detail::level_segment(model, 0, times.t_lo),
         detail::level_segment(model, model.n_levels() - 1, times.t_hi)},
        window, model);
    return cand.energy_j <= rd.energy_j ? cand : rd;
}

// Optimal frequency mix by exact enumeration of the basic feasible solutions
// of the linear program: single levels finishing early, and level pairs that
// fill the window. At most two frequencies can be active in an optimum, so
// the enumeration is exhaustive.
inline ReclaimPlan mfs_dvfs(const SlackWindow& window, const ProcessorModel& model) {
    const double k = static_cast<double>(window.cycles);
    const double t_window = window.window_s;
    if (k > t_window * model.f_max() * (1.0 + kCycleTol))
        throw validation_error("mfs_dvfs: task is infeasible within its window");

    const auto fid = ideal_frequency(window, model);
    if (fid.relation == IdealRelation::AboveMax ||
        (fid.relation == IdealRelation::ExactLevel &&
         static_cast<std::size_t>(fid.exact_level) == model.n_levels() - 1)) {
        ReclaimPlan rd = rdvfs(window, model);
        rd.algorithm = Algorithm::MFS;
        return rd;
    }

    const std::size_t n = model.n_levels();
    ReclaimPlan best;
    double best_energy = std::numeric_limits<double>::infinity();
    int best_span = std::numeric_limits<int>::max();
    auto consider = [&](std::vector<Segment> segs, int span) {
        ReclaimPlan plan =
            detail::finish_plan(window.task_id, Algorithm::MFS, std::move(segs), window, model);
        if (plan.energy_j < best_energy * (1.0 - 1e-15) ||
            (plan.energy_j <= best_energy * (1.0 + 1e-15) && span < best_span)) {
            best = std::move(plan);
            best_energy = best.energy_j;
            best_span = span;
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double t = k / model.level(i).hz;
        if (t <= t_window * (1.0 + kCycleTol))
            consider({detail::level_segment(model, i, t)}, 0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto times =
                detail::pair_times(model.level(i).hz, model.level(j).hz, k, t_window);
            if (times.feasible)
                consider({detail::level_segment(model, i, times.t_lo),
                          detail::level_segment(model, j, times.t_hi)},
                         static_cast<int>(j - i));
        }
    }
    if (!std::isfinite(best_energy))
        throw integrity_error("mfs_dvfs: no feasible frequency assignment");
    return best;
}

// Two-frequency optimum under a general monotone power table: enumerate every
// pair straddling f_ideal (low group x high group) over the full window, plus
// the exact-level single frequency, and keep the cheapest.
inline ReclaimPlan mvfs_dvfs(const SlackWindow& window, const ProcessorModel& model) {
    const auto fid = ideal_frequency(window, model);
    if (fid.relation == IdealRelation::BelowMin || fid.relation == IdealRelation::AboveMax) {
        ReclaimPlan rd = rdvfs(window, model);
        rd.algorithm = Algorithm::MVFS;
        return rd;
    }

    const double k = static_cast<double>(window.cycles);
    const double t_window = window.window_s;
    const std::size_t n = model.n_levels();

    ReclaimPlan best;
    double best_energy = std::numeric_limits<double>::infinity();
    int best_span = std::numeric_limits<int>::max();
    auto consider = [&](std::vector<Segment> segs, int span) {
        ReclaimPlan plan =
            detail::finish_plan(window.task_id, Algorithm::MVFS, std::move(segs), window, model);
        if (plan.energy_j < best_energy * (1.0 - 1e-15) ||
            (plan.energy_j <= best_energy * (1.0 + 1e-15) && span < best_span)) {
            best = std::move(plan);
            best_energy = best.energy_j;
            best_span = span;
        }
    };

    if (fid.relation == IdealRelation::ExactLevel)
        consider({detail::level_segment(model, static_cast<std::size_t>(fid.exact_level),
                                        t_window)},
                 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (model.level(i).hz > fid.hz)
            break;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (model.level(j).hz < fid.hz)
                continue;
            const auto times =
                detail::pair_times(model.level(i).hz, model.level(j).hz, k, t_window);
            if (times.feasible)
                consider({detail::level_segment(model, i, times.t_lo),
                          detail::level_segment(model, j, times.t_hi)},
                         static_cast<int>(j - i));
        }
    }
    if (!std::isfinite(best_energy))
        throw integrity_error("mvfs_dvfs: no feasible frequency pair");
    return best;
}

// Closed-form variant under the cubic law: the optimal pair is the adjacent
// one straddling f_ideal, so no search is needed.
inline ReclaimPlan smfs_dvfs(const SlackWindow& window, const ProcessorModel& model) {
    const auto fid = ideal_frequency(window, model);
    if (fid.relation == IdealRelation::BelowMin || fid.relation == IdealRelation::AboveMax) {
        ReclaimPlan rd = rdvfs(window, model);
        rd.algorithm = Algorithm::SMFS;
        return rd;
    }

    const double k = static_cast<double>(window.cycles);
    const double t_window = window.window_s;
    if (fid.relation == IdealRelation::ExactLevel)
        return detail::finish_plan(
            window.task_id, Algorithm::SMFS,
            {detail::level_segment(model, static_cast<std::size_t>(fid.exact_level), t_window)},
            window, model);

    const std::size_t hi = model.lowest_level_at_or_above(fid.hz); // f_RD
    const std::size_t lo = hi - 1;                                 // f_RD-1
    const auto times = detail::pair_times(model.level(lo).hz, model.level(hi).hz, k, t_window);
    if (!times.feasible)
        throw integrity_error("smfs_dvfs: straddling pair infeasible");
    return detail::finish_plan(window.task_id, Algorithm::SMFS,
                               {detail::level_segment(model, lo, times.t_lo),
                                detail::level_segment(model, hi, times.t_hi)},
                               window, model);
}

struct ReclaimOptions {
    // Frequency-transition eligibility: windows shorter than
    // min_window_ratio * transition_s fall back to RDVFS for the
    // multi-frequency algorithms.
    double transition_s = 150e-6;
    double min_window_ratio = 20.0;
};

inline ReclaimPlan apply_algorithm(Algorithm algo, const SlackWindow& window,
                                   const ProcessorModel& model,
                                   const ReclaimOptions& options = {}) {
    const bool multi_freq = algo == Algorithm::MMF || algo == Algorithm::MFS ||
                            algo == Algorithm::MVFS || algo == Algorithm::SMFS;
    if (multi_freq && window.window_s < options.min_window_ratio * options.transition_s) {
        ReclaimPlan rd = rdvfs(window, model);
        rd.algorithm = algo;
        rd.degenerate = true;
        return rd;
    }
    switch (algo) {
    case Algorithm::Original: return original_plan(window, model);
    case Algorithm::ContinuousBound: return continuous_bound(window, model);
    case Algorithm::RDVFS: return rdvfs(window, model);
    case Algorithm::MMF: return mmf_dvfs(window, model);
    case Algorithm::MFS: return mfs_dvfs(window, model);
    case Algorithm::MVFS: return mvfs_dvfs(window, model);
    case Algorithm::SMFS: return smfs_dvfs(window, model);
    }
    throw validation_error("unknown algorithm");
}

struct SystemReport {
    Algorithm algorithm = Algorithm::Original;
    double makespan_s = 0.0;
    double energy_j = 0.0;
    double original_energy_j = 0.0;
    double normalized_energy = 1.0;
    double saving_pct = 0.0;
};

struct ReclaimResult {
    std::vector<ReclaimPlan> plans;
    SystemReport report;
};

namespace detail {

inline double system_energy(const std::vector<ReclaimPlan>& plans, int n_procs,
                            double makespan_s, const ProcessorModel& model) {
    double active_energy = 0.0, active_time = 0.0;
    for (const auto& plan : plans) {
        for (const auto& seg : plan.segments) {
            active_energy += segment_power(seg, model) * seg.duration_s;
            active_time += seg.duration_s;
        }
    }
    return active_energy + model.idle_power() * (n_procs * makespan_s - active_time);
}

} // namespace detail

// Applies one algorithm to every slack window and accounts system energy:
// active segments plus idle power over all processor time not spent executing.
inline ReclaimResult reclaim_schedule(const Schedule& sched,
                                      const std::vector<SlackWindow>& windows,
                                      const ProcessorModel& model, Algorithm algo,
                                      const ReclaimOptions& options = {}) {
    if (windows.size() != sched.entries.size())
        throw integrity_error("reclaim_schedule: window count does not match schedule");

    ReclaimResult out;
    out.plans.reserve(windows.size());
    std::vector<ReclaimPlan> originals;
    originals.reserve(windows.size());
    for (const auto& w : windows) {
        out.plans.push_back(apply_algorithm(algo, w, model, options));
        originals.push_back(original_plan(w, model));
    }
    out.report.algorithm = algo;
    out.report.makespan_s = sched.makespan_s;
    out.report.energy_j =
        detail::system_energy(out.plans, sched.n_processors, sched.makespan_s, model);
    out.report.original_energy_j =
        detail::system_energy(originals, sched.n_processors, sched.makespan_s, model);
    out.report.normalized_energy = out.report.energy_j / out.report.original_energy_j;
    out.report.saving_pct = 100.0 * (1.0 - out.report.normalized_energy);
    return out;
}

} // namespace dvfs
