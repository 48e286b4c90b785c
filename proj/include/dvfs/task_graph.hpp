#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <dvfs/errors.hpp>

namespace dvfs {

using TaskId = int;

struct Task {
    TaskId id = 0;
    std::uint64_t cycles = 0; // clock ticks, invariant across frequencies
};

struct Edge {
    TaskId from = 0;
    TaskId to = 0;
    double comm_s = 0.0; // cross-processor communication cost
};

enum class GraphFamily { Random, LU, GaussJordan };

// Kahn topological sort over raw task/edge lists; nullopt when the input has
// a cycle or dangling edge. Ties resolve by ascending id, so the order is
// deterministic.
inline std::optional<std::vector<TaskId>> topological_order(const std::vector<Task>& tasks,
                                                            const std::vector<Edge>& edges) {
    std::map<TaskId, int> in_degree;
    std::map<TaskId, std::vector<TaskId>> out_edges;
    for (const auto& t : tasks)
        in_degree[t.id] = 0;
    for (const auto& e : edges) {
        if (e.from == e.to || !in_degree.count(e.from) || !in_degree.count(e.to))
            return std::nullopt;
        out_edges[e.from].push_back(e.to);
        ++in_degree[e.to];
    }
    std::vector<TaskId> ready;
    for (const auto& [id, deg] : in_degree)
        if (deg == 0)
            ready.push_back(id);
    std::vector<TaskId> order;
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end());
        TaskId id = ready.front();
        ready.erase(ready.begin());
        order.push_back(id);
        for (TaskId nxt : out_edges[id])
            if (--in_degree[nxt] == 0)
                ready.push_back(nxt);
    }
    if (order.size() != tasks.size())
        return std::nullopt;
    return order;
}

// Violation report for a candidate graph; empty means valid.
inline std::vector<std::string> graph_violations(const std::vector<Task>& tasks,
                                                 const std::vector<Edge>& edges) {
    std::vector<std::string> out;
    std::map<TaskId, std::size_t> index;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (index.count(tasks[i].id))
            out.push_back("duplicate task id " + std::to_string(tasks[i].id));
        index[tasks[i].id] = i;
        if (tasks[i].cycles == 0)
            out.push_back("task " + std::to_string(tasks[i].id) + " has zero cycles");
    }
    std::map<std::pair<TaskId, TaskId>, int> seen;
    for (const auto& e : edges) {
        if (e.from == e.to)
            out.push_back("self-loop on task " + std::to_string(e.from));
        if (!index.count(e.from) || !index.count(e.to))
            out.push_back("dangling edge " + std::to_string(e.from) + "->" + std::to_string(e.to));
        if (++seen[{e.from, e.to}] == 2)
            out.push_back("duplicate edge " + std::to_string(e.from) + "->" + std::to_string(e.to));
        if (e.comm_s < 0)
            out.push_back("negative communication cost on edge " + std::to_string(e.from) + "->" +
                          std::to_string(e.to));
    }
    if (out.empty() && !topological_order(tasks, edges))
        out.push_back("cycle detected");
    return out;
}

inline const char* family_name(GraphFamily f) {
    switch (f) {
    case GraphFamily::Random: return "random";
    case GraphFamily::LU: return "lu";
    case GraphFamily::GaussJordan: return "gauss-jordan";
    }
    return "?";
}

inline GraphFamily family_from_name(const std::string& s) {
    if (s == "random") return GraphFamily::Random;
    if (s == "lu") return GraphFamily::LU;
    if (s == "gauss-jordan" || s == "gaussjordan") return GraphFamily::GaussJordan;
    throw validation_error("unknown graph family '" + s + "'");
}

class TaskGraph {
  public:
    TaskGraph() = default;
    TaskGraph(std::vector<Task> tasks, std::vector<Edge> edges, GraphFamily family)
        : tasks_(std::move(tasks)), edges_(std::move(edges)), family_(family) {
        const auto report = violations();
        if (!report.empty())
            throw validation_error("invalid task graph: " + report.front());
        index_edges();
    }

    const std::vector<Task>& tasks() const { return tasks_; }
    const std::vector<Edge>& edges() const { return edges_; }
    GraphFamily family() const { return family_; }
    std::size_t n_tasks() const { return tasks_.size(); }

    const Task& task(TaskId id) const {
        for (const auto& t : tasks_)
            if (t.id == id)
                return t;
        throw validation_error("unknown task id " + std::to_string(id));
    }

    const std::vector<std::pair<TaskId, double>>& predecessors(TaskId id) const {
        static const std::vector<std::pair<TaskId, double>> none;
        auto it = preds_.find(id);
        return it == preds_.end() ? none : it->second;
    }
    const std::vector<std::pair<TaskId, double>>& successors(TaskId id) const {
        static const std::vector<std::pair<TaskId, double>> none;
        auto it = succs_.find(id);
        return it == succs_.end() ? none : it->second;
    }

    std::vector<std::string> violations() const { return graph_violations(tasks_, edges_); }

    std::optional<std::vector<TaskId>> topological_order() const {
        return dvfs::topological_order(tasks_, edges_);
    }

  private:
    void index_edges() {
        for (const auto& e : edges_) {
            preds_[e.to].push_back({e.from, e.comm_s});
            succs_[e.from].push_back({e.to, e.comm_s});
        }
    }

    std::vector<Task> tasks_;
    std::vector<Edge> edges_;
    GraphFamily family_ = GraphFamily::Random;
    std::map<TaskId, std::vector<std::pair<TaskId, double>>> preds_;
    std::map<TaskId, std::vector<std::pair<TaskId, double>>> succs_;
};

namespace detail {

// Deterministic uniform draws on top of mt19937_64. The engine output is
// standardized; the mappings below avoid the implementation-defined
// std::uniform_*_distribution so identical seeds give identical graphs on
// every platform.
struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform01() {
        return (engine() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
        return lo + static_cast<std::uint64_t>(uniform01() * static_cast<double>(hi - lo + 1)) %
                        (hi - lo + 1);
    }

    std::mt19937_64 engine;
};

} // namespace detail

struct CycleRange {
    std::uint64_t lo = 5'000'000;
    std::uint64_t hi = 10'000'000;
};

struct CommRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Random DAG: tasks 0..n-1, each pair i<j wired with probability edge_prob.
inline TaskGraph gen_random(int n_tasks, double edge_prob, CycleRange cycles, CommRange comm,
                            std::uint64_t seed) {
    if (n_tasks < 1)
        throw validation_error("gen_random: need at least one task");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw validation_error("gen_random: edge probability outside [0, 1]");
    if (cycles.lo > cycles.hi || cycles.lo == 0)
        throw validation_error("gen_random: empty cycle range");
    if (comm.lo > comm.hi || comm.lo < 0.0)
        throw validation_error("gen_random: empty communication range");

    detail::Rng rng(seed);
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(n_tasks));
    for (int i = 0; i < n_tasks; ++i)
        tasks.push_back({i, rng.uniform_u64(cycles.lo, cycles.hi)});
    std::vector<Edge> edges;
    for (int i = 0; i < n_tasks; ++i)
        for (int j = i + 1; j < n_tasks; ++j)
            if (rng.uniform01() < edge_prob)
                edges.push_back({i, j, rng.uniform(comm.lo, comm.hi)});
    return TaskGraph(std::move(tasks), std::move(edges), GraphFamily::Random);
}

// Coarse-grain LU elimination DAG for an m x m matrix: pivot tasks V_k and
// update tasks U_{k,j}. Node ids follow the construction order.
inline TaskGraph gen_lu(int m, std::uint64_t cycles, double comm_s) {
    if (m < 2)
        throw validation_error("gen_lu: matrix order must be at least 2");
    if (cycles == 0)
        throw validation_error("gen_lu: cycles must be positive");

    // id maps: pivot V_k for k=1..m-1, update U_{k,j} for j=k+1..m.
    auto pivot_id = [](int k) { return k - 1; };
    auto update_id = [m](int k, int j) {
        // updates come after the m-1 pivots, row-major in k then j
        int offset = m - 1;
        for (int kk = 1; kk < k; ++kk)
            offset += m - kk;
        return offset + (j - k - 1);
    };

    std::vector<Task> tasks;
    std::vector<Edge> edges;
    for (int k = 1; k <= m - 1; ++k)
        tasks.push_back({pivot_id(k), cycles});
    for (int k = 1; k <= m - 1; ++k)
        for (int j = k + 1; j <= m; ++j)
            tasks.push_back({update_id(k, j), cycles});
    std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });

    for (int k = 1; k <= m - 1; ++k) {
        for (int j = k + 1; j <= m; ++j)
            edges.push_back({pivot_id(k), update_id(k, j), comm_s});
        if (k + 1 <= m - 1) {
            edges.push_back({update_id(k, k + 1), pivot_id(k + 1), comm_s});
            for (int j = k + 2; j <= m; ++j)
                edges.push_back({update_id(k, j), update_id(k + 1, j), comm_s});
        }
    }
    return TaskGraph(std::move(tasks), std::move(edges), GraphFamily::LU);
}

// Gauss-Jordan elimination DAG: tasks T_{k,j} for k<=j, densely chained.
// The 10-second default communication cost matches the reference layout.
inline TaskGraph gen_gauss_jordan(int levels, std::uint64_t cycles, double comm_s = 10.0) {
    if (levels < 1)
        throw validation_error("gen_gauss_jordan: need at least one level");
    if (cycles == 0)
        throw validation_error("gen_gauss_jordan: cycles must be positive");

    auto node_id = [levels](int k, int j) {
        int offset = 0;
        for (int kk = 1; kk < k; ++kk)
            offset += levels - kk + 1;
        return offset + (j - k);
    };

    std::vector<Task> tasks;
    std::vector<Edge> edges;
    for (int k = 1; k <= levels; ++k)
        for (int j = k; j <= levels; ++j)
            tasks.push_back({node_id(k, j), cycles});
    for (int k = 1; k <= levels; ++k) {
        for (int j = k + 1; j <= levels; ++j)
            edges.push_back({node_id(k, k), node_id(k, j), comm_s});
        if (k + 1 <= levels)
            for (int j = k + 1; j <= levels; ++j)
                edges.push_back({node_id(k, j), node_id(k + 1, j), comm_s});
    }
    return TaskGraph(std::move(tasks), std::move(edges), GraphFamily::GaussJordan);
}

// Benchmark-family variants with per-node cycles drawn from the random
// generator's range.
inline TaskGraph gen_lu_random_cycles(int m, CycleRange cycles, double comm_s,
                                      std::uint64_t seed) {
    TaskGraph base = gen_lu(m, 1, comm_s);
    detail::Rng rng(seed);
    std::vector<Task> tasks = base.tasks();
    for (auto& t : tasks)
        t.cycles = rng.uniform_u64(cycles.lo, cycles.hi);
    return TaskGraph(std::move(tasks), base.edges(), GraphFamily::LU);
}

inline TaskGraph gen_gauss_jordan_random_cycles(int levels, CycleRange cycles, double comm_s,
                                                std::uint64_t seed) {
    TaskGraph base = gen_gauss_jordan(levels, 1, comm_s);
    detail::Rng rng(seed);
    std::vector<Task> tasks = base.tasks();
    for (auto& t : tasks)
        t.cycles = rng.uniform_u64(cycles.lo, cycles.hi);
    return TaskGraph(std::move(tasks), base.edges(), GraphFamily::GaussJordan);
}

} // namespace dvfs
