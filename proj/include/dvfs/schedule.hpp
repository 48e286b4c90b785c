#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <dvfs/errors.hpp>
#include <dvfs/power_model.hpp>
#include <dvfs/task_graph.hpp>

namespace dvfs {

enum class Policy { Plain, LPT, SPT };

inline const char* policy_name(Policy p) {
    switch (p) {
    case Policy::Plain: return "plain";
    case Policy::LPT: return "lpt";
    case Policy::SPT: return "spt";
    }
    return "?";
}

inline Policy policy_from_name(const std::string& s) {
    if (s == "plain") return Policy::Plain;
    if (s == "lpt") return Policy::LPT;
    if (s == "spt") return Policy::SPT;
    throw validation_error("unknown scheduling policy '" + s + "'");
}

struct ScheduleEntry {
    TaskId task_id = 0;
    int processor = 0;
    double start_s = 0.0;
    double finish_s = 0.0;
};

struct Schedule {
    std::vector<ScheduleEntry> entries;
    int n_processors = 0;
    double makespan_s = 0.0;

    const ScheduleEntry& entry_for(TaskId id) const {
        for (const auto& e : entries)
            if (e.task_id == id)
                return e;
        throw integrity_error("schedule has no entry for task " + std::to_string(id));
    }
};

// The stretchable interval of one task: executing anywhere inside
// [start, start + window] at any speed covering `cycles` keeps every other
// start time and the makespan intact.
struct SlackWindow {
    TaskId task_id = 0;
    double window_s = 0.0;    // T
    double exec_s = 0.0;      // t_OS, execution time at f_max
    std::uint64_t cycles = 0; // K
};

// Classic list scheduling at f_max. The ready set is ordered by the policy
// (ties by ascending id) and each task goes to the processor offering the
// earliest feasible start given predecessor finishes and communication.
inline Schedule list_schedule(const TaskGraph& graph, int n_procs, Policy policy,
                              const ProcessorModel& model) {
    if (n_procs < 1)
        throw validation_error("list_schedule: need at least one processor");
    {
        const auto report = graph.violations();
        if (!report.empty())
            throw validation_error("list_schedule: invalid graph: " + report.front());
    }

    const double f_max = model.f_max();
    std::map<TaskId, double> exec;
    std::map<TaskId, std::size_t> unscheduled_preds;
    for (const auto& t : graph.tasks()) {
        exec[t.id] = static_cast<double>(t.cycles) / f_max;
        unscheduled_preds[t.id] = graph.predecessors(t.id).size();
    }

    std::vector<TaskId> ready;
    for (const auto& t : graph.tasks())
        if (unscheduled_preds[t.id] == 0)
            ready.push_back(t.id);

    std::vector<double> proc_free(static_cast<std::size_t>(n_procs), 0.0);
    std::map<TaskId, ScheduleEntry> placed;
    Schedule sched;
    sched.n_processors = n_procs;

    auto pick_next = [&]() {
        auto best = ready.begin();
        for (auto it = ready.begin(); it != ready.end(); ++it) {
            bool better = false;
            switch (policy) {
            case Policy::Plain: better = *it < *best; break;
            case Policy::LPT:
                better = exec[*it] > exec[*best] || (exec[*it] == exec[*best] && *it < *best);
                break;
            case Policy::SPT:
                better = exec[*it] < exec[*best] || (exec[*it] == exec[*best] && *it < *best);
                break;
            }
            if (better)
                best = it;
        }
        TaskId id = *best;
        ready.erase(best);
        return id;
    };

    while (!ready.empty()) {
        const TaskId id = pick_next();
        int best_proc = 0;
        double best_start = std::numeric_limits<double>::infinity();
        for (int p = 0; p < n_procs; ++p) {
            double est = proc_free[static_cast<std::size_t>(p)];
            for (const auto& [pred, comm] : graph.predecessors(id)) {
                const auto& pe = placed.at(pred);
                est = std::max(est, pe.finish_s + (pe.processor == p ? 0.0 : comm));
            }
            if (est < best_start) {
                best_start = est;
                best_proc = p;
            }
        }
        ScheduleEntry e{id, best_proc, best_start, best_start + exec[id]};
        placed[id] = e;
        sched.entries.push_back(e);
        proc_free[static_cast<std::size_t>(best_proc)] = e.finish_s;
        sched.makespan_s = std::max(sched.makespan_s, e.finish_s);
        for (const auto& [succ, comm] : graph.successors(id)) {
            (void)comm;
            if (--unscheduled_preds[succ] == 0)
                ready.push_back(succ);
        }
    }

    if (sched.entries.size() != graph.n_tasks())
        throw integrity_error("list_schedule: not all tasks were scheduled");
    return sched;
}

// Checks non-overlap per processor and precedence plus communication
// feasibility. Returns violation strings; empty means consistent.
inline std::vector<std::string> check_schedule(const Schedule& sched, const TaskGraph& graph,
                                               double eps = 1e-9) {
    std::vector<std::string> out;
    std::map<int, std::vector<const ScheduleEntry*>> per_proc;
    for (const auto& e : sched.entries) {
        if (e.finish_s < e.start_s - eps)
            out.push_back("task " + std::to_string(e.task_id) + " finishes before it starts");
        if (e.processor < 0 || e.processor >= sched.n_processors)
            out.push_back("task " + std::to_string(e.task_id) + " on unknown processor");
        per_proc[e.processor].push_back(&e);
    }
    for (auto& [p, list] : per_proc) {
        std::sort(list.begin(), list.end(),
                  [](const ScheduleEntry* a, const ScheduleEntry* b) { return a->start_s < b->start_s; });
        for (std::size_t i = 0; i + 1 < list.size(); ++i)
            if (list[i]->finish_s > list[i + 1]->start_s + eps)
                out.push_back("overlap on processor " + std::to_string(p));
    }
    for (const auto& e : graph.edges()) {
        const auto& a = sched.entry_for(e.from);
        const auto& b = sched.entry_for(e.to);
        const double gap = (a.processor == b.processor) ? 0.0 : e.comm_s;
        if (b.start_s + eps < a.finish_s + gap)
            out.push_back("precedence violated on edge " + std::to_string(e.from) + "->" +
                          std::to_string(e.to));
    }
    double max_finish = 0.0;
    for (const auto& e : sched.entries)
        max_finish = std::max(max_finish, e.finish_s);
    if (std::abs(max_finish - sched.makespan_s) > eps)
        out.push_back("makespan does not match the latest finish");
    return out;
}

// Per-task slack windows. The window of task a ends at the earliest of: the
// next start on its processor (makespan when a is last), each same-processor
// successor's start, and each cross-processor successor's start minus the
// edge's communication cost. This is the widest stretch that provably leaves
// all other start times and the makespan unchanged.
inline std::vector<SlackWindow> compute_windows(const Schedule& sched, const TaskGraph& graph) {
    {
        const auto report = check_schedule(sched, graph);
        if (!report.empty())
            throw integrity_error("compute_windows: inconsistent schedule: " + report.front());
    }

    std::map<int, std::vector<const ScheduleEntry*>> per_proc;
    for (const auto& e : sched.entries)
        per_proc[e.processor].push_back(&e);
    for (auto& [p, list] : per_proc)
        std::sort(list.begin(), list.end(),
                  [](const ScheduleEntry* a, const ScheduleEntry* b) { return a->start_s < b->start_s; });

    std::vector<SlackWindow> windows;
    windows.reserve(sched.entries.size());
    for (const auto& e : sched.entries) {
        double window_end = sched.makespan_s;
        const auto& list = per_proc[e.processor];
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i]->task_id == e.task_id && i + 1 < list.size()) {
                window_end = std::min(window_end, list[i + 1]->start_s);
                break;
            }
        }
        for (const auto& [succ, comm] : graph.successors(e.task_id)) {
            const auto& se = sched.entry_for(succ);
            const double bound = (se.processor == e.processor) ? se.start_s : se.start_s - comm;
            window_end = std::min(window_end, bound);
        }
        SlackWindow w;
        w.task_id = e.task_id;
        w.exec_s = e.finish_s - e.start_s;
        w.window_s = std::max(window_end - e.start_s, w.exec_s);
        w.cycles = graph.task(e.task_id).cycles;
        windows.push_back(w);
    }
    return windows;
}

} // namespace dvfs
