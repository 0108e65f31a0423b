#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "trex/engine.hpp"

namespace trex {

/// Machine-readable result of one query run, serialized as JSON (default)
/// or as a `start,end` CSV.
struct match_report {
    std::string query;
    std::size_t n_rows = 0;
    std::string mode;
    std::string backend;
    std::vector<match_span> matches;
    std::vector<std::string> diagnostics;

    bool operator==(const match_report& o) const {
        return query == o.query && n_rows == o.n_rows && mode == o.mode && backend == o.backend &&
               matches == o.matches && diagnostics == o.diagnostics;
    }
};

inline match_report make_report(const std::string& query, const engine_config& config,
                                const match_result& result) {
    match_report rep;
    rep.query = query;
    rep.n_rows = result.n_rows;
    rep.mode = to_string(config.mode);
    rep.backend = result.backend_used;
    rep.matches = result.spans;
    rep.diagnostics = result.diagnostics;
    return rep;
}

inline nlohmann::ordered_json to_json(const match_report& rep) {
    nlohmann::ordered_json j;
    j["query"] = rep.query;
    j["n_rows"] = rep.n_rows;
    j["mode"] = rep.mode;
    j["backend"] = rep.backend;
    j["matches"] = nlohmann::ordered_json::array();
    for (const auto& m : rep.matches)
        j["matches"].push_back({{"start", m.start}, {"end", m.end}, {"empty", m.empty}});
    j["diagnostics"] = rep.diagnostics;
    return j;
}

inline match_report report_from_json(const nlohmann::json& j) {
    match_report rep;
    rep.query = j.at("query").get<std::string>();
    rep.n_rows = j.at("n_rows").get<std::size_t>();
    rep.mode = j.at("mode").get<std::string>();
    rep.backend = j.at("backend").get<std::string>();
    for (const auto& m : j.at("matches")) {
        match_span s;
        s.start = m.at("start").get<std::int64_t>();
        s.end = m.at("end").get<std::int64_t>();
        s.empty = m.at("empty").get<bool>();
        rep.matches.push_back(s);
    }
    for (const auto& d : j.at("diagnostics")) rep.diagnostics.push_back(d.get<std::string>());
    return rep;
}

inline std::string to_csv(const match_report& rep) {
    std::string out = "start,end\n";
    for (const auto& m : rep.matches)
        out += std::to_string(m.start) + "," + std::to_string(m.end) + "\n";
    return out;
}

} // namespace trex
