#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <dvfs/campaign.hpp>
#include <dvfs/errors.hpp>
#include <dvfs/io.hpp>

namespace dvfs {

namespace detail {

// Minimal TOML reader for flat campaign configs: `key = value` lines with
// strings, numbers, booleans and one-level arrays. Comments start with '#'.
// The result is normalized into a JSON object so both formats share one
// decoding path.
inline json parse_mini_toml(const std::string& text) {
    json doc = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    auto parse_scalar = [&](const std::string& tok) -> json {
        if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
            return tok.substr(1, tok.size() - 2);
        if (tok == "true")
            return true;
        if (tok == "false")
            return false;
        try {
            if (tok.find_first_of(".eE") != std::string::npos)
                return std::stod(tok);
            return std::stoll(tok);
        } catch (...) {
            throw io_error("config: bad value '" + tok + "' on line " + std::to_string(lineno));
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside strings
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"')
                in_str = !in_str;
            else if (line[i] == '#' && !in_str) {
                line.resize(i);
                break;
            }
        }
        line = strip(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
            throw io_error("config: TOML tables are not supported (line " +
                           std::to_string(lineno) + ")");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw io_error("config: expected 'key = value' on line " + std::to_string(lineno));
        const std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw io_error("config: empty key or value on line " + std::to_string(lineno));
        if (value.front() == '[') {
            if (value.back() != ']')
                throw io_error("config: unterminated array on line " + std::to_string(lineno));
            json arr = json::array();
            std::string body = value.substr(1, value.size() - 2);
            std::istringstream items(body);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = strip(item);
                if (!item.empty())
                    arr.push_back(parse_scalar(item));
            }
            doc[key] = std::move(arr);
        } else {
            doc[key] = parse_scalar(value);
        }
    }
    return doc;
}

} // namespace detail

inline CampaignConfig campaign_config_from_json(const json& doc) {
    CampaignConfig cfg;
    try {
        if (doc.contains("processor"))
            cfg.processor_preset = doc.at("processor").get<std::string>();
        if (doc.contains("power_source")) {
            const std::string s = doc.at("power_source").get<std::string>();
            if (s == "fit")
                cfg.power_source = PowerSource::CubicFit;
            else if (s == "table")
                cfg.power_source = PowerSource::Table;
            else
                throw validation_error("config: power_source must be 'fit' or 'table'");
        }
        if (doc.contains("idle_watts"))
            cfg.idle_watts = doc.at("idle_watts").get<double>();
        if (doc.contains("task_counts"))
            cfg.task_counts = doc.at("task_counts").get<std::vector<int>>();
        if (doc.contains("processor_counts"))
            cfg.processor_counts = doc.at("processor_counts").get<std::vector<int>>();
        if (doc.contains("schedulers")) {
            cfg.schedulers.clear();
            for (const auto& s : doc.at("schedulers"))
                cfg.schedulers.push_back(policy_from_name(s.get<std::string>()));
        }
        if (doc.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& s : doc.at("algorithms"))
                cfg.algorithms.push_back(algorithm_from_name(s.get<std::string>()));
        }
        if (doc.contains("graphs_per_cell"))
            cfg.graphs_per_cell = doc.at("graphs_per_cell").get<int>();
        if (doc.contains("families")) {
            cfg.families.clear();
            for (const auto& s : doc.at("families"))
                cfg.families.push_back(family_from_name(s.get<std::string>()));
        }
        if (doc.contains("seed"))
            cfg.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("edge_prob"))
            cfg.edge_prob = doc.at("edge_prob").get<double>();
        if (doc.contains("cycles_lo"))
            cfg.cycles.lo = doc.at("cycles_lo").get<std::uint64_t>();
        if (doc.contains("cycles_hi"))
            cfg.cycles.hi = doc.at("cycles_hi").get<std::uint64_t>();
        if (doc.contains("comm_lo"))
            cfg.comm.lo = doc.at("comm_lo").get<double>();
        if (doc.contains("comm_hi"))
            cfg.comm.hi = doc.at("comm_hi").get<double>();
        if (doc.contains("lu_comm_s"))
            cfg.lu_comm_s = doc.at("lu_comm_s").get<double>();
        if (doc.contains("gj_comm_s"))
            cfg.gj_comm_s = doc.at("gj_comm_s").get<double>();
        if (doc.contains("transition_s"))
            cfg.reclaim.transition_s = doc.at("transition_s").get<double>();
        if (doc.contains("min_window_ratio"))
            cfg.reclaim.min_window_ratio = doc.at("min_window_ratio").get<double>();
        if (doc.contains("threads"))
            cfg.threads = doc.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed campaign config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

// Loads a campaign config from a .toml or .json file (sniffed by extension,
// then by first non-space character).
inline CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    bool looks_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    if (!looks_json) {
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c)))
                continue;
            looks_json = (c == '{');
            break;
        }
    }
    json doc;
    if (looks_json) {
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw io_error("cannot parse '" + path + "': " + e.what());
        }
    } else {
        doc = detail::parse_mini_toml(text);
    }
    return campaign_config_from_json(doc);
}

} // namespace dvfs
