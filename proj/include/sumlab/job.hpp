// SPDX-License-Identifier: Apache-2.0
//
// Job-file driven runs: declare signals / kernels / grids / task in JSON,
// get CSV or JSON reports and optional sweep traces. Validation is strict:
// unknown keys are rejected with the offending key named, and grid
// invariant violations surface verbatim (exit code 2 in the CLI).

#pragma once

#include <filesystem>
#include <fstream>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumlab/report_io.hpp"
#include "sumlab/verify.hpp"

namespace sumlab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct JobConfig {
    std::string task = "suite";  // "suite" | "functional-eval"
    std::string suite = "smoke";
    std::vector<ContinuousSignal> csignals;
    std::vector<DiscreteSignal> dsignals;
    std::vector<MultiplicativeSignal> msignals;
    std::vector<Kernel> kernels;
    bool use_canonical_signals = true;
    bool use_canonical_kernels = true;
    SuiteConfig cfg;
    std::string output_path;  // empty -> report.<format>
    std::string format = "csv";
};

struct RunOptions {
    std::string out_dir = ".";
    std::optional<std::string> format_override;
    std::optional<std::string> suite_override;
    bool trace = false;
    bool full_scan = false;
    std::uint64_t seed = 0;  // reserved; runs are deterministic
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline double num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline ParamMap parse_params(const json& j, const std::string& where) {
    ParamMap p;
    if (!j.is_object()) throw ConfigError(where + ".params: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = num(it.value(), where + ".params." + it.key());
    return p;
}

inline void parse_signal(const json& j, JobConfig& out) {
    check_keys(j, {"name", "params", "label", "domain", "values"}, "signals[]");
    const std::string name = j.at("name").get<std::string>();
    const std::string domain = j.value("domain", "continuous");
    const std::string label = j.value("label", name);
    ParamMap params;
    if (j.contains("params")) params = parse_params(j["params"], "signals[]");
    if (name == "sampled") {
        if (!j.contains("values")) throw ConfigError("signals[]: sampled signal needs 'values'");
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : j["values"]) {
            if (!row.is_array() || row.size() != 2) throw ConfigError("signals[].values: expected [t, value] pairs");
            pts.emplace_back(num(row[0], "values.t"), num(row[1], "values.v"));
        }
        out.csignals.push_back(signals::sampled(pts, label));
        return;
    }
    try {
        if (domain == "continuous")
            out.csignals.push_back(signals::continuous(name, params, label));
        else if (domain == "discrete")
            out.dsignals.push_back(signals::discrete(name, params, label));
        else if (domain == "multiplicative")
            out.msignals.push_back(signals::multiplicative(name, params, label));
        else
            throw ConfigError("signals[].domain: unknown domain '" + domain + "'");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("signals[]: ") + e.what());
    }
}

inline std::vector<std::pair<double, double>> read_kernel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("kernels[].csv: cannot read " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("kernels[].csv: expected 't,value' lines");
        pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    if (pts.size() < 2) throw ConfigError("kernels[].csv: need at least two samples");
    return pts;
}

inline void parse_kernel(const json& j, JobConfig& out) {
    check_keys(j, {"name", "params", "label", "values", "csv"}, "kernels[]");
    const std::string name = j.at("name").get<std::string>();
    const std::string label = j.value("label", name);
    ParamMap params;
    if (j.contains("params")) params = parse_params(j["params"], "kernels[]");
    auto get = [&](const std::string& k, double fb) {
        auto it = params.find(k);
        return it == params.end() ? fb : it->second;
    };
    try {
        if (name == "exp" || name == "exponential")
            out.kernels.push_back(kernels::exponential(get("rate", 1.0), label));
        else if (name == "erlang")
            out.kernels.push_back(kernels::erlang(get("rate", 1.0), int(get("k", 2.0)), label));
        else if (name == "box")
            out.kernels.push_back(kernels::box(get("width", 1.0), label));
        else if (name == "gaussian")
            out.kernels.push_back(kernels::gaussian(get("sigma", 1.0), label));
        else if (name == "sampled") {
            std::vector<std::pair<double, double>> pts;
            if (j.contains("csv")) {
                pts = read_kernel_csv(j["csv"].get<std::string>());
            } else if (j.contains("values")) {
                for (const auto& row : j["values"]) {
                    if (!row.is_array() || row.size() != 2)
                        throw ConfigError("kernels[].values: expected [t, value] pairs");
                    pts.emplace_back(num(row[0], "values.t"), num(row[1], "values.v"));
                }
            } else {
                throw ConfigError("kernels[]: sampled kernel needs 'values' or 'csv'");
            }
            out.kernels.push_back(kernels::from_samples(pts, label));
        } else {
            throw ConfigError("kernels[].name: unknown kernel '" + name + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("kernels[]: ") + e.what());
    }
}

inline void parse_grid(const json& j, GridSpec& g) {
    check_keys(j, {"x_max", "step", "x_cut", "theta_grid"}, "grid");
    if (j.contains("x_max")) g.x_max = num(j["x_max"], "grid.x_max");
    if (j.contains("step")) g.step = num(j["step"], "grid.step");
    if (j.contains("x_cut")) g.x_cut = num(j["x_cut"], "grid.x_cut");
    if (j.contains("theta_grid")) {
        g.theta_grid.clear();
        for (const auto& v : j["theta_grid"]) g.theta_grid.push_back(num(v, "grid.theta_grid[]"));
    }
}

inline void parse_discrete_grid(const json& j, DiscreteGrid& g) {
    check_keys(j, {"n_max", "n_cut", "theta_grid", "holder_k_max", "banach_k_grid"}, "discrete_grid");
    if (j.contains("n_max")) g.n_max = std::int64_t(num(j["n_max"], "discrete_grid.n_max"));
    if (j.contains("n_cut")) g.n_cut = std::int64_t(num(j["n_cut"], "discrete_grid.n_cut"));
    if (j.contains("theta_grid")) {
        g.theta_grid.clear();
        for (const auto& v : j["theta_grid"])
            g.theta_grid.push_back(std::int64_t(num(v, "discrete_grid.theta_grid[]")));
    }
    if (j.contains("holder_k_max")) g.holder_k_max = int(num(j["holder_k_max"], "discrete_grid.holder_k_max"));
    if (j.contains("banach_k_grid")) {
        g.banach_k_grid.clear();
        for (const auto& v : j["banach_k_grid"])
            g.banach_k_grid.push_back(std::int64_t(num(v, "discrete_grid.banach_k_grid[]")));
    }
}

inline void parse_mult_grid(const json& j, MultiplicativeGrid& g) {
    check_keys(j, {"u_max", "du", "u_cut", "window_lengths"}, "multiplicative_grid");
    if (j.contains("u_max")) g.u_max = num(j["u_max"], "multiplicative_grid.u_max");
    if (j.contains("du")) g.du = num(j["du"], "multiplicative_grid.du");
    if (j.contains("u_cut")) g.u_cut = num(j["u_cut"], "multiplicative_grid.u_cut");
    if (j.contains("window_lengths")) {
        g.window_lengths.clear();
        for (const auto& v : j["window_lengths"])
            g.window_lengths.push_back(num(v, "multiplicative_grid.window_lengths[]"));
    }
}

inline void parse_tolerances(const json& j, SuiteConfig& cfg) {
    check_keys(j, {"eps", "quadrature", "instability", "monotone_slack"}, "tolerances");
    if (j.contains("eps")) {
        cfg.eps = num(j["eps"], "tolerances.eps");
        cfg.tol.eps_limit = cfg.eps;
    }
    if (j.contains("quadrature")) cfg.tol.eps_quadrature = num(j["quadrature"], "tolerances.quadrature");
    if (j.contains("instability")) cfg.tol.instability = num(j["instability"], "tolerances.instability");
    if (j.contains("monotone_slack"))
        cfg.tol.monotone_slack = num(j["monotone_slack"], "tolerances.monotone_slack");
}

}  // namespace detail

inline JobConfig parse_job(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("job file is not valid JSON: ") + e.what());
    }
    detail::check_keys(j, {"task", "suite", "signals", "kernels", "grid", "discrete_grid",
                           "multiplicative_grid", "tolerances", "output"},
                       "job");
    JobConfig out;
    if (j.contains("task")) out.task = j["task"].get<std::string>();
    if (out.task != "suite" && out.task != "functional-eval")
        throw ConfigError("task: expected 'suite' or 'functional-eval'");
    if (j.contains("suite")) out.suite = j["suite"].get<std::string>();
    if (j.contains("signals")) {
        out.use_canonical_signals = false;
        for (const auto& s : j["signals"]) detail::parse_signal(s, out);
    }
    if (j.contains("kernels")) {
        out.use_canonical_kernels = false;
        for (const auto& k : j["kernels"]) detail::parse_kernel(k, out);
    }
    if (j.contains("grid")) detail::parse_grid(j["grid"], out.cfg.grid);
    if (j.contains("discrete_grid")) detail::parse_discrete_grid(j["discrete_grid"], out.cfg.dgrid);
    if (j.contains("multiplicative_grid")) detail::parse_mult_grid(j["multiplicative_grid"], out.cfg.mgrid);
    if (j.contains("tolerances")) detail::parse_tolerances(j["tolerances"], out.cfg);
    if (j.contains("output")) {
        detail::check_keys(j["output"], {"path", "format"}, "output");
        if (j["output"].contains("path")) out.output_path = j["output"]["path"].get<std::string>();
        if (j["output"].contains("format")) out.format = j["output"]["format"].get<std::string>();
    }
    if (out.format != "csv" && out.format != "json")
        throw ConfigError("output.format: expected 'csv' or 'json'");
    try {
        out.cfg.grid.validate();
        out.cfg.dgrid.validate();
        out.cfg.mgrid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

inline JobConfig load_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read job file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_job(ss.str());
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

struct EvalRow {
    std::string functional, signal, kernel;
    double value = 0.0, lower = 0.0, residual = 0.0;
    bool unstable = false;
    std::vector<std::pair<double, double>> trace;
};

inline std::string eval_rows_to_csv(const std::vector<EvalRow>& rows) {
    std::string out = "functional,signal,kernel,value,lower,residual,unstable\n";
    for (const auto& r : rows)
        out += r.functional + "," + r.signal + "," + r.kernel + "," + fmt_full(r.value) + "," +
               fmt_full(r.lower) + "," + fmt_full(r.residual) + "," + (r.unstable ? "1" : "0") + "\n";
    return out;
}

inline std::string eval_rows_to_json(const std::vector<EvalRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"functional", r.functional},
                       {"signal", r.signal},
                       {"kernel", r.kernel},
                       {"value", fmt_full(r.value)},
                       {"lower", fmt_full(r.lower)},
                       {"residual", fmt_full(r.residual)},
                       {"unstable", r.unstable}});
    }
    return nlohmann::json{{"rows", arr}}.dump(2) + "\n";
}

}  // namespace detail

/// Runs a parsed job. Exit code contract: 0 all pass, 1 at least one fail,
/// 3 non-pass rows are all inconclusive. (Config errors throw ConfigError;
/// the CLI maps those to exit 2.)
inline int run_job(const JobConfig& job, const RunOptions& opt) {
    namespace fs = std::filesystem;
    JobConfig j = job;  // local copy for overrides
    if (opt.suite_override) j.suite = *opt.suite_override;
    if (opt.format_override) {
        if (*opt.format_override != "csv" && *opt.format_override != "json")
            throw ConfigError("--format: expected 'csv' or 'json'");
        j.format = *opt.format_override;
    }
    j.cfg.full_scan = opt.full_scan;
    fs::create_directories(opt.out_dir);
    const fs::path out_path =
        fs::path(opt.out_dir) / (j.output_path.empty() ? "report." + j.format : j.output_path);

    if (j.task == "functional-eval") {
        if (j.use_canonical_signals) {
            j.csignals = verify::continuous_suite();
            j.dsignals = verify::discrete_suite();
            j.msignals = verify::multiplicative_suite();
        }
        if (j.use_canonical_kernels) j.kernels = verify::suite_kernels();
        std::vector<detail::EvalRow> rows;
        auto push = [&](const std::string& fn, const std::string& sig, const std::string& ker,
                        const FunctionalEstimate& e) {
            rows.push_back({fn, sig, ker, e.value, e.companion_lower, e.stability_residual,
                            e.unstable, e.trace});
        };
        for (const auto& phi : j.csignals) {
            push("upper_P", phi.label(), "", upper_P(phi, j.cfg.grid, j.cfg.tol));
            push("lower_P", phi.label(), "", lower_P(phi, j.cfg.grid, j.cfg.tol));
            for (const auto& k : j.kernels) {
                push("upper_F", phi.label(), k.label, upper_F(k, phi, j.cfg.grid, j.cfg.tol));
                push("lower_F", phi.label(), k.label, lower_F(k, phi, j.cfg.grid, j.cfg.tol));
                if (k.nonnegative)
                    push("F_infinity", phi.label(), k.label,
                         F_infinity(k, phi, j.cfg.grid, j.cfg.f_infinity_k_max, 1e-3, j.cfg.tol));
            }
        }
        for (const auto& phi : j.msignals) {
            push("upper_Q", phi.label(), "", upper_Q(phi, j.cfg.mgrid, j.cfg.tol));
            push("lower_Q", phi.label(), "", lower_Q(phi, j.cfg.mgrid, j.cfg.tol));
        }
        for (const auto& phi : j.dsignals) {
            push("holder_upper_1", phi.label(), "", holder_upper(phi, 1, j.cfg.dgrid, j.cfg.tol));
            push("c_infinity_upper", phi.label(), "", c_infinity_upper(phi, j.cfg.dgrid, j.cfg.tol));
            push("logarithmic", phi.label(), "", logarithmic_method(phi, j.cfg.dgrid, j.cfg.tol));
            push("banach_upper", phi.label(), "", banach_upper(phi, j.cfg.dgrid, j.cfg.tol));
        }
        detail::write_file(out_path, j.format == "csv" ? detail::eval_rows_to_csv(rows)
                                                       : detail::eval_rows_to_json(rows));
        if (opt.trace) {
            for (const auto& r : rows) {
                if (r.trace.empty()) continue;
                const std::string name = detail::sanitize(r.functional + "_" + r.signal +
                                                          (r.kernel.empty() ? "" : "_" + r.kernel)) +
                                         "_trace.csv";
                detail::write_file(fs::path(opt.out_dir) / name, trace_to_csv(r.trace));
            }
        }
        return 0;
    }

    // suite task
    std::vector<TheoremReport> reports;
    if (j.use_canonical_signals && j.use_canonical_kernels) {
        reports = run_suite(j.suite, j.cfg);
    } else {
        auto cs = j.use_canonical_signals ? verify::continuous_suite() : j.csignals;
        auto ds = j.use_canonical_signals ? verify::discrete_suite() : j.dsignals;
        auto ms = j.use_canonical_signals ? verify::multiplicative_suite() : j.msignals;
        auto ks = j.use_canonical_kernels ? verify::suite_kernels() : j.kernels;
        reports = run_suite(j.suite, cs, ds, ms, ks, j.cfg);
    }
    detail::write_file(out_path,
                       j.format == "csv" ? reports_to_csv(reports) : reports_to_json(reports));
    if (opt.trace) {
        auto cs = j.use_canonical_signals ? verify::continuous_suite() : j.csignals;
        for (const auto& phi : cs) {
            const auto est = upper_P(phi, j.cfg.grid, j.cfg.tol);
            detail::write_file(
                fs::path(opt.out_dir) / (detail::sanitize("upper_P_" + phi.label()) + "_trace.csv"),
                trace_to_csv(est.trace, "theta"));
        }
        auto ds = j.use_canonical_signals ? verify::discrete_suite() : j.dsignals;
        for (const auto& phi : ds) {
            const auto est = c_infinity_upper(phi, j.cfg.dgrid, j.cfg.tol);
            detail::write_file(
                fs::path(opt.out_dir) /
                    (detail::sanitize("c_infinity_upper_" + phi.label()) + "_trace.csv"),
                trace_to_csv(est.trace, "theta"));
        }
    }
    const SuiteSummary s = summarize(reports);
    std::printf("suite %s: %d pass (%d with unmet premise), %d fail, %d inconclusive -> %s\n",
                j.suite.c_str(), s.pass, s.vacuous, s.fail, s.inconclusive, out_path.string().c_str());
    if (s.fail > 0) return 1;
    if (s.inconclusive > 0) return 3;
    return 0;
}

}  // namespace sumlab
