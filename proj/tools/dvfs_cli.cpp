// Command-line front end: graph generation, scheduling, slack reclamation,
// campaign sweeps and report aggregation.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dvfs/campaign.hpp>
#include <dvfs/config.hpp>
#include <dvfs/io.hpp>
#include <dvfs/reclaim.hpp>
#include <dvfs/schedule.hpp>
#include <dvfs/task_graph.hpp>

namespace {

using namespace dvfs;

ProcessorModel resolve_processor(const std::string& spec, double idle_watts,
                                 const std::string& source) {
    PowerSource src;
    if (source == "fit")
        src = PowerSource::CubicFit;
    else if (source == "table")
        src = PowerSource::Table;
    else
        throw validation_error("--power-source must be 'fit' or 'table'");
    if (spec.find('/') != std::string::npos ||
        (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")) {
        return load_processor(read_json_file(spec))
            .with_idle_power(idle_watts)
            .with_power_source(src);
    }
    return presets::by_name(spec, idle_watts, src);
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_text_file(out_path, text);
}

std::string summary_csv(const std::vector<SummaryRow>& rows, const std::string& group_header) {
    std::string out = group_header + ",count,mean_saving_pct,min_saving_pct,max_saving_pct\n";
    for (const auto& s : rows)
        out += s.group + ',' + std::to_string(s.count) + ',' +
               detail::fmt_double(s.mean_saving_pct) + ',' +
               detail::fmt_double(s.min_saving_pct) + ',' +
               detail::fmt_double(s.max_saving_pct) + '\n';
    return out;
}

json summary_json(const std::vector<SummaryRow>& rows) {
    json arr = json::array();
    for (const auto& s : rows)
        arr.push_back({{"group", s.group},
                       {"count", s.count},
                       {"mean_saving_pct", s.mean_saving_pct},
                       {"min_saving_pct", s.min_saving_pct},
                       {"max_saving_pct", s.max_saving_pct}});
    return arr;
}

std::vector<std::string> split_fields(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware DVFS slack reclamation toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string processor = "transmeta-crusoe";
    double idle_watts = 0.0;
    std::string power_source = "fit";
    std::string out_path;
    std::string format = "csv";
    app.add_option("--seed", seed, "seed for all randomized generation")->capture_default_str();
    app.add_option("--processor", processor, "processor preset name or document path")
        ->capture_default_str();
    app.add_option("--idle-watts", idle_watts, "idle power in watts")->capture_default_str();
    app.add_option("--power-source", power_source, "active power source: fit|table")
        ->capture_default_str();
    app.add_option("--out", out_path, "output file ('-' or empty for stdout)");
    app.add_option("--format", format, "output format: csv|json")->capture_default_str();
    app.fallthrough();

    // generate
    auto* gen = app.add_subcommand("generate", "generate a task graph document");
    std::string family = "random";
    int n_tasks = 100;
    double edge_prob = 0.1;
    std::uint64_t cycles_lo = 5'000'000, cycles_hi = 10'000'000;
    double comm_lo = 0.0, comm_hi = 0.002;
    gen->add_option("--family", family, "random|lu|gauss-jordan")->capture_default_str();
    gen->add_option("--tasks", n_tasks, "target task count")->capture_default_str();
    gen->add_option("--edge-prob", edge_prob, "random family edge probability")
        ->capture_default_str();
    gen->add_option("--cycles-lo", cycles_lo)->capture_default_str();
    gen->add_option("--cycles-hi", cycles_hi)->capture_default_str();
    gen->add_option("--comm-lo", comm_lo)->capture_default_str();
    gen->add_option("--comm-hi", comm_hi)->capture_default_str();

    // schedule
    auto* sch = app.add_subcommand("schedule", "list-schedule a graph document");
    std::string graph_path;
    int n_procs = 4;
    std::string policy = "plain";
    sch->add_option("--graph", graph_path, "graph document")->required();
    sch->add_option("--procs", n_procs, "processor count")->capture_default_str();
    sch->add_option("--policy", policy, "plain|lpt|spt")->capture_default_str();

    // reclaim
    auto* rec = app.add_subcommand("reclaim", "schedule a graph and reclaim its slack");
    std::string algorithm = "smfs";
    double transition_s = 150e-6;
    double min_window_ratio = 20.0;
    rec->add_option("--graph", graph_path, "graph document")->required();
    rec->add_option("--procs", n_procs, "processor count")->capture_default_str();
    rec->add_option("--policy", policy, "plain|lpt|spt")->capture_default_str();
    rec->add_option("--algorithm", algorithm,
                    "original|rdvfs|mmf|mfs|mvfs|smfs|continuous")
        ->capture_default_str();
    rec->add_option("--transition-s", transition_s, "frequency transition time")
        ->capture_default_str();
    rec->add_option("--min-window-ratio", min_window_ratio,
                    "multi-frequency eligibility: window >= ratio * transition")
        ->capture_default_str();

    // campaign
    auto* cam = app.add_subcommand("campaign", "run a full experiment sweep");
    std::string config_path;
    int threads = 0;
    cam->add_option("--config", config_path, "campaign config (.toml or .json)");
    cam->add_option("--threads", threads, "worker threads (0 keeps the config value)")
        ->capture_default_str();

    // report
    auto* rep = app.add_subcommand("report", "aggregate a campaign CSV");
    std::string in_path;
    std::string group = "algorithm";
    rep->add_option("--in", in_path, "campaign CSV")->required();
    rep->add_option("--group", group, "comma-separated group-by fields")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            TaskGraph g = [&] {
                const GraphFamily fam = family_from_name(family);
                switch (fam) {
                case GraphFamily::Random:
                    return gen_random(n_tasks, edge_prob, {cycles_lo, cycles_hi},
                                      {comm_lo, comm_hi}, seed);
                case GraphFamily::LU:
                    return gen_lu_random_cycles(detail::lu_order_for(n_tasks),
                                                {cycles_lo, cycles_hi}, comm_lo, seed);
                default:
                    return gen_gauss_jordan_random_cycles(detail::gj_levels_for(n_tasks),
                                                          {cycles_lo, cycles_hi}, 10.0, seed);
                }
            }();
            emit(out_path, graph_to_json(g).dump(2) + "\n");
        } else if (*sch) {
            const auto model = resolve_processor(processor, idle_watts, power_source);
            const auto g = load_graph(read_json_file(graph_path));
            const auto s = list_schedule(g, n_procs, policy_from_name(policy), model);
            emit(out_path, schedule_to_json(s).dump(2) + "\n");
        } else if (*rec) {
            const auto model = resolve_processor(processor, idle_watts, power_source);
            const auto g = load_graph(read_json_file(graph_path));
            const auto s = list_schedule(g, n_procs, policy_from_name(policy), model);
            const auto windows = compute_windows(s, g);
            ReclaimOptions opts;
            opts.transition_s = transition_s;
            opts.min_window_ratio = min_window_ratio;
            const auto result =
                reclaim_schedule(s, windows, model, algorithm_from_name(algorithm), opts);
            json doc;
            doc["schedule"] = schedule_to_json(s);
            doc["plans"] = json::array();
            for (const auto& p : result.plans)
                doc["plans"].push_back(plan_to_json(p));
            doc["report"] = {{"algorithm", algorithm_name(result.report.algorithm)},
                             {"makespan_s", result.report.makespan_s},
                             {"energy_j", result.report.energy_j},
                             {"original_energy_j", result.report.original_energy_j},
                             {"normalized_energy", result.report.normalized_energy},
                             {"saving_pct", result.report.saving_pct}};
            emit(out_path, doc.dump(2) + "\n");
        } else if (*cam) {
            CampaignConfig cfg;
            if (!config_path.empty())
                cfg = load_campaign_config(config_path);
            if (app.count("--seed"))
                cfg.seed = seed;
            if (app.count("--processor"))
                cfg.processor_preset = processor;
            if (app.count("--idle-watts"))
                cfg.idle_watts = idle_watts;
            if (app.count("--power-source"))
                cfg.power_source = power_source == "table" ? PowerSource::Table
                                                           : PowerSource::CubicFit;
            if (threads > 0)
                cfg.threads = threads;
            const auto rows = run_campaign(cfg);
            if (format == "json") {
                json arr = json::array();
                for (const auto& r : rows)
                    arr.push_back({{"graph_id", r.graph_id},
                                   {"family", r.family},
                                   {"algorithm", r.algorithm},
                                   {"scheduler", r.scheduler},
                                   {"n_procs", r.n_procs},
                                   {"n_tasks", r.n_tasks},
                                   {"makespan_s", r.makespan_s},
                                   {"energy_j", r.energy_j},
                                   {"normalized_energy", r.normalized_energy},
                                   {"saving_pct", r.saving_pct}});
                emit(out_path, arr.dump(2) + "\n");
            } else if (format == "csv") {
                emit(out_path, rows_to_csv(rows));
            } else {
                throw validation_error("--format must be 'csv' or 'json'");
            }
        } else if (*rep) {
            std::ifstream in(in_path);
            if (!in)
                throw io_error("cannot open '" + in_path + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            const auto rows = rows_from_csv(buf.str());
            const auto fields = split_fields(group);
            const auto summary = summarize(rows, fields);
            if (format == "json")
                emit(out_path, summary_json(summary).dump(2) + "\n");
            else
                emit(out_path, summary_csv(summary, group) + "");
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
