#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <dvfs/errors.hpp>
#include <dvfs/power_model.hpp>
#include <dvfs/reclaim.hpp>
#include <dvfs/schedule.hpp>
#include <dvfs/task_graph.hpp>

namespace dvfs {

struct CampaignConfig {
    std::string processor_preset = "transmeta-crusoe";
    PowerSource power_source = PowerSource::CubicFit;
    double idle_watts = 0.0;
    std::vector<int> task_counts{100, 200, 300, 400, 500};
    std::vector<int> processor_counts{2, 4, 8, 16, 32};
    std::vector<Policy> schedulers{Policy::Plain, Policy::LPT, Policy::SPT};
    std::vector<Algorithm> algorithms{Algorithm::Original, Algorithm::RDVFS,  Algorithm::MMF,
                                      Algorithm::MFS,      Algorithm::MVFS,   Algorithm::SMFS,
                                      Algorithm::ContinuousBound};
    int graphs_per_cell = 20;
    std::vector<GraphFamily> families{GraphFamily::Random};
    std::uint64_t seed = 42;

    // graph-generation knobs
    double edge_prob = 0.1;
    CycleRange cycles{5'000'000, 10'000'000};
    CommRange comm{0.0, 0.002};
    double lu_comm_s = 0.002;
    double gj_comm_s = 10.0;

    ReclaimOptions reclaim;
    int threads = 1;

    void validate() const {
        if (task_counts.empty() || processor_counts.empty() || schedulers.empty() ||
            algorithms.empty() || families.empty())
            throw validation_error("campaign config: all sweep lists must be nonempty");
        if (graphs_per_cell < 1)
            throw validation_error("campaign config: graphs_per_cell must be at least 1");
        if (threads < 1)
            throw validation_error("campaign config: threads must be at least 1");
    }
};

struct ReportRow {
    std::string graph_id;
    std::string family;
    std::string algorithm;
    std::string scheduler;
    int n_procs = 0;
    int n_tasks = 0;
    double makespan_s = 0.0;
    double energy_j = 0.0;
    double normalized_energy = 1.0;
    double saving_pct = 0.0; // percent, 100 * (1 - normalized)
};

inline constexpr const char* kCsvHeader =
    "graph_id,family,algorithm,scheduler,n_procs,n_tasks,makespan_s,energy_j,"
    "normalized_energy,saving_pct";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splittable per-cell seed: parallel execution order cannot change results.
inline std::uint64_t cell_seed(std::uint64_t seed, GraphFamily family, int n_tasks, int index) {
    std::uint64_t h = splitmix64(seed ^ (0x1000ULL + static_cast<std::uint64_t>(family)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(n_tasks));
    return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Smallest LU order whose node count reaches the requested size.
inline int lu_order_for(int n_tasks) {
    for (int m = 2;; ++m)
        if ((m - 1) + m * (m - 1) / 2 >= n_tasks)
            return m;
}

inline int gj_levels_for(int n_tasks) {
    for (int l = 1;; ++l)
        if (l * (l + 1) / 2 >= n_tasks)
            return l;
}

inline TaskGraph generate_for_cell(const CampaignConfig& cfg, GraphFamily family, int n_tasks,
                                   int index) {
    const std::uint64_t seed = cell_seed(cfg.seed, family, n_tasks, index);
    switch (family) {
    case GraphFamily::Random:
        return gen_random(n_tasks, cfg.edge_prob, cfg.cycles, cfg.comm, seed);
    case GraphFamily::LU:
        return gen_lu_random_cycles(lu_order_for(n_tasks), cfg.cycles, cfg.lu_comm_s, seed);
    case GraphFamily::GaussJordan:
        return gen_gauss_jordan_random_cycles(gj_levels_for(n_tasks), cfg.cycles, cfg.gj_comm_s,
                                              seed);
    }
    throw validation_error("unknown graph family");
}

} // namespace detail

// Full (graph x processor-count x scheduler x algorithm) sweep. The output is
// a pure function of the config: per-graph seeds are derived from the config
// seed, and rows are sorted canonically before being returned.
inline std::vector<ReportRow> run_campaign(const CampaignConfig& cfg) {
    cfg.validate();
    const ProcessorModel model =
        presets::by_name(cfg.processor_preset, cfg.idle_watts, cfg.power_source);

    struct Item {
        GraphFamily family;
        int n_tasks;
        int index;
    };
    std::vector<Item> items;
    for (GraphFamily family : cfg.families)
        for (int n_tasks : cfg.task_counts)
            for (int g = 0; g < cfg.graphs_per_cell; ++g)
                items.push_back({family, n_tasks, g});

    auto run_item = [&](const Item& item) {
        std::vector<ReportRow> rows;
        const TaskGraph graph = detail::generate_for_cell(cfg, item.family, item.n_tasks, item.index);
        char idbuf[64];
        std::snprintf(idbuf, sizeof idbuf, "%s-n%d-g%03d", family_name(item.family), item.n_tasks,
                      item.index);
        for (int n_procs : cfg.processor_counts) {
            for (Policy policy : cfg.schedulers) {
                const Schedule sched = list_schedule(graph, n_procs, policy, model);
                const auto windows = compute_windows(sched, graph);
                for (Algorithm algo : cfg.algorithms) {
                    const auto result =
                        reclaim_schedule(sched, windows, model, algo, cfg.reclaim);
                    ReportRow row;
                    row.graph_id = idbuf;
                    row.family = family_name(item.family);
                    row.algorithm = algorithm_name(algo);
                    row.scheduler = policy_name(policy);
                    row.n_procs = n_procs;
                    row.n_tasks = static_cast<int>(graph.n_tasks());
                    row.makespan_s = result.report.makespan_s;
                    row.energy_j = result.report.energy_j;
                    row.normalized_energy = result.report.normalized_energy;
                    row.saving_pct = result.report.saving_pct;
                    rows.push_back(std::move(row));
                }
            }
        }
        return rows;
    };

    std::vector<ReportRow> all;
    if (cfg.threads <= 1) {
        for (const auto& item : items) {
            auto rows = run_item(item);
            all.insert(all.end(), rows.begin(), rows.end());
        }
    } else {
        std::vector<std::future<std::vector<ReportRow>>> futures;
        futures.reserve(items.size());
        for (const auto& item : items)
            futures.push_back(std::async(std::launch::async, run_item, item));
        for (auto& f : futures) {
            auto rows = f.get();
            all.insert(all.end(), rows.begin(), rows.end());
        }
    }

    std::sort(all.begin(), all.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.family, a.n_tasks, a.graph_id, a.n_procs, a.scheduler, a.algorithm) <
               std::tie(b.family, b.n_tasks, b.graph_id, b.n_procs, b.scheduler, b.algorithm);
    });
    return all;
}

// ---- CSV --------------------------------------------------------------------

inline std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.graph_id + ',' + r.family + ',' + r.algorithm + ',' + r.scheduler + ',' +
               std::to_string(r.n_procs) + ',' + std::to_string(r.n_tasks) + ',' +
               detail::fmt_double(r.makespan_s) + ',' + detail::fmt_double(r.energy_j) + ',' +
               detail::fmt_double(r.normalized_energy) + ',' + detail::fmt_double(r.saving_pct) +
               '\n';
    }
    return out;
}

inline std::vector<ReportRow> rows_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw io_error("report CSV: missing or unexpected header");
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (fields.size() != 10)
            throw io_error("report CSV: malformed row '" + line + "'");
        ReportRow r;
        r.graph_id = fields[0];
        r.family = fields[1];
        r.algorithm = fields[2];
        r.scheduler = fields[3];
        r.n_procs = std::stoi(fields[4]);
        r.n_tasks = std::stoi(fields[5]);
        r.makespan_s = std::stod(fields[6]);
        r.energy_j = std::stod(fields[7]);
        r.normalized_energy = std::stod(fields[8]);
        r.saving_pct = std::stod(fields[9]);
        if (!(r.normalized_energy > 0.0) || r.normalized_energy > 1.0 + 1e-9)
            throw validation_error("report CSV: normalized energy outside (0, 1] in '" + line +
                                   "'");
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---- aggregation ------------------------------------------------------------

struct SummaryRow {
    std::string group; // joined group-by field values
    int count = 0;
    double mean_saving_pct = 0.0;
    double min_saving_pct = 0.0;
    double max_saving_pct = 0.0;
};

inline std::string report_field(const ReportRow& r, const std::string& field) {
    if (field == "graph_id") return r.graph_id;
    if (field == "family") return r.family;
    if (field == "algorithm") return r.algorithm;
    if (field == "scheduler") return r.scheduler;
    if (field == "n_procs") return std::to_string(r.n_procs);
    if (field == "n_tasks") return std::to_string(r.n_tasks);
    throw validation_error("unknown report field '" + field + "'");
}

inline std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows,
                                         const std::vector<std::string>& group_by) {
    if (rows.empty())
        throw validation_error("summarize: no rows");
    std::map<std::string, std::vector<double>> groups;
    for (const auto& r : rows) {
        std::string key;
        for (const auto& f : group_by) {
            if (!key.empty())
                key += ',';
            key += report_field(r, f);
        }
        groups[key].push_back(r.saving_pct);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, vals] : groups) {
        SummaryRow s;
        s.group = key;
        s.count = static_cast<int>(vals.size());
        s.min_saving_pct = *std::min_element(vals.begin(), vals.end());
        s.max_saving_pct = *std::max_element(vals.begin(), vals.end());
        double sum = 0.0;
        for (double v : vals)
            sum += v;
        s.mean_saving_pct = sum / static_cast<double>(vals.size());
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace dvfs
