#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <dvfs/errors.hpp>
#include <dvfs/power_model.hpp>
#include <dvfs/reclaim.hpp>
#include <dvfs/schedule.hpp>
#include <dvfs/task_graph.hpp>

namespace dvfs {

using json = nlohmann::json;

// ---- processor documents ----------------------------------------------------
// {"name": str, "levels": [{"mhz", "volt", "watt"}...], "idle_watt": num,
//  "fit": {"alpha_mw_per_mhz3", "gamma_mw"} | "ols", "power_source": "fit"|"table"}

inline ProcessorModel load_processor(const json& doc) {
    try {
        const std::string name = doc.at("name").get<std::string>();
        std::vector<FrequencyLevel> levels;
        for (const auto& lv : doc.at("levels")) {
            levels.push_back({lv.at("mhz").get<double>() * mhz, lv.at("volt").get<double>(),
                              lv.at("watt").get<double>()});
        }
        const double idle_w = doc.value("idle_watt", 0.0);
        CubicFit fit;
        if (!doc.contains("fit") || (doc.at("fit").is_string() && doc.at("fit") == "ols")) {
            fit = fit_cubic(levels);
        } else {
            const auto& f = doc.at("fit");
            fit = CubicFit{f.at("alpha_mw_per_mhz3").get<double>() * mw_per_mhz3,
                           f.at("gamma_mw").get<double>() * milliwatt};
        }
        const std::string src = doc.value("power_source", "fit");
        PowerSource source;
        if (src == "fit")
            source = PowerSource::CubicFit;
        else if (src == "table")
            source = PowerSource::Table;
        else
            throw validation_error("processor document: power_source must be 'fit' or 'table'");
        return ProcessorModel(name, std::move(levels), idle_w, fit, source);
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed processor document: ") + e.what());
    }
}

inline json processor_to_json(const ProcessorModel& model) {
    json doc;
    doc["name"] = model.name();
    doc["levels"] = json::array();
    for (const auto& lv : model.levels())
        doc["levels"].push_back({{"mhz", lv.hz / mhz}, {"volt", lv.volts}, {"watt", lv.watts}});
    doc["idle_watt"] = model.idle_power();
    doc["fit"] = {{"alpha_mw_per_mhz3", model.fit().alpha_w_per_hz3 / mw_per_mhz3},
                  {"gamma_mw", model.fit().gamma_w / milliwatt}};
    doc["power_source"] = model.power_source() == PowerSource::Table ? "table" : "fit";
    return doc;
}

// ---- graph documents --------------------------------------------------------
// {"family": str, "tasks": [{"id", "cycles"}...], "edges": [{"from", "to", "comm_s"}...]}

inline TaskGraph load_graph(const json& doc) {
    try {
        std::vector<Task> tasks;
        for (const auto& t : doc.at("tasks"))
            tasks.push_back({t.at("id").get<TaskId>(), t.at("cycles").get<std::uint64_t>()});
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges"))
            edges.push_back({e.at("from").get<TaskId>(), e.at("to").get<TaskId>(),
                             e.at("comm_s").get<double>()});
        const GraphFamily family = family_from_name(doc.value("family", "random"));
        return TaskGraph(std::move(tasks), std::move(edges), family);
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed graph document: ") + e.what());
    }
}

inline json graph_to_json(const TaskGraph& graph) {
    json doc;
    doc["family"] = family_name(graph.family());
    doc["tasks"] = json::array();
    for (const auto& t : graph.tasks())
        doc["tasks"].push_back({{"id", t.id}, {"cycles", t.cycles}});
    doc["edges"] = json::array();
    for (const auto& e : graph.edges())
        doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"comm_s", e.comm_s}});
    return doc;
}

// ---- schedule documents -----------------------------------------------------
// {"n_procs": int, "makespan_s": num, "entries": [{"task", "proc", "start_s", "finish_s"}...]}

inline json schedule_to_json(const Schedule& sched) {
    json doc;
    doc["n_procs"] = sched.n_processors;
    doc["makespan_s"] = sched.makespan_s;
    doc["entries"] = json::array();
    for (const auto& e : sched.entries)
        doc["entries"].push_back({{"task", e.task_id},
                                  {"proc", e.processor},
                                  {"start_s", e.start_s},
                                  {"finish_s", e.finish_s}});
    return doc;
}

inline Schedule load_schedule(const json& doc) {
    try {
        Schedule sched;
        sched.n_processors = doc.at("n_procs").get<int>();
        sched.makespan_s = doc.at("makespan_s").get<double>();
        for (const auto& e : doc.at("entries"))
            sched.entries.push_back({e.at("task").get<TaskId>(), e.at("proc").get<int>(),
                                     e.at("start_s").get<double>(),
                                     e.at("finish_s").get<double>()});
        return sched;
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed schedule document: ") + e.what());
    }
}

// ---- plan documents ---------------------------------------------------------
// {"task": int, "algorithm": str, "segments": [{"level", "mhz", "dur_s"}...],
//  "idle_s": num, "energy_j": num}

inline json plan_to_json(const ReclaimPlan& plan) {
    json doc;
    doc["task"] = plan.task_id;
    doc["algorithm"] = algorithm_name(plan.algorithm);
    doc["segments"] = json::array();
    for (const auto& s : plan.segments)
        doc["segments"].push_back(
            {{"level", s.level_index}, {"mhz", s.hz / mhz}, {"dur_s", s.duration_s}});
    doc["idle_s"] = plan.idle_s;
    doc["energy_j"] = plan.energy_j;
    return doc;
}

// ---- file helpers -----------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw io_error("cannot parse '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot write '" + path + "'");
    out << text;
}

} // namespace dvfs
