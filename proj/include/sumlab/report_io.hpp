// SPDX-License-Identifier: Apache-2.0
//
// Report and trace serialization. Every numeric cell is written with 17
// significant digits so downstream regression diffs are exact.

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumlab/functionals.hpp"
#include "sumlab/report.hpp"
#include "sumlab/verify.hpp"

namespace sumlab {

inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {
inline std::string join_named(const std::vector<std::pair<std::string, double>>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ";";
        out += xs[i].first + "=" + fmt_full(xs[i].second);
    }
    return out;
}
}  // namespace detail

inline std::string reports_to_csv(const std::vector<TheoremReport>& reports) {
    std::string out = "theorem_id,signal,kernel,status,discrepancies,tolerances,note\n";
    for (const auto& r : reports) {
        out += r.theorem_id + "," + r.signal + "," + r.kernel + "," + to_string(r.status) + "," +
               detail::join_named(r.discrepancies) + "," + detail::join_named(r.tolerances) + "," +
               r.note + "\n";
    }
    return out;
}

inline nlohmann::json report_to_json(const TheoremReport& r) {
    nlohmann::json j;
    j["theorem_id"] = r.theorem_id;
    j["signal"] = r.signal;
    j["kernel"] = r.kernel;
    j["status"] = to_string(r.status);
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [name, v] : r.discrepancies) d.push_back({{"name", name}, {"value", fmt_full(v)}});
    j["discrepancies"] = d;
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [name, v] : r.tolerances) t.push_back({{"name", name}, {"value", fmt_full(v)}});
    j["tolerances"] = t;
    j["note"] = r.note;
    return j;
}

inline std::string reports_to_json(const std::vector<TheoremReport>& reports) {
    const SuiteSummary s = summarize(reports);
    nlohmann::json j;
    j["summary"] = {{"pass", s.pass},
                    {"fail", s.fail},
                    {"inconclusive", s.inconclusive},
                    {"vacuous_pass", s.vacuous}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    j["reports"] = arr;
    return j.dump(2) + "\n";
}

/// (parameter, value) rows of a sweep trace.
inline std::string trace_to_csv(const std::vector<std::pair<double, double>>& trace,
                                const std::string& parameter_name = "parameter") {
    std::string out = parameter_name + ",value\n";
    for (const auto& [p, v] : trace) out += fmt_full(p) + "," + fmt_full(v) + "\n";
    return out;
}

}  // namespace sumlab
