// SPDX-License-Identifier: Apache-2.0
//
// Job-file driven front end. Exit codes: 0 all reports pass, 1 at least one
// fail, 2 config error, 3 non-pass outcomes are all inconclusive.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sumlab/job.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sumlab: summability functionals, kernel classification and theorem suites"};

    std::string job_path;
    sumlab::RunOptions opt;
    std::string format;
    std::string suite;
    std::uint64_t seed = 0;

    app.add_option("--job", job_path, "path to the JSON job file")->required();
    app.add_option("--out", opt.out_dir, "output directory (default: current)");
    app.add_option("--format", format, "report format: csv or json (overrides the job file)");
    app.add_option("--suite", suite, "suite id (overrides the job file)");
    app.add_option("--seed", seed, "reserved; runs are deterministic");
    app.add_flag("--trace", opt.trace, "emit sweep traces as (parameter, value) CSV files");
    app.add_flag("--full-scan", opt.full_scan, "uniformity modulus over every n, not the geometric grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (!format.empty()) opt.format_override = format;
    if (!suite.empty()) opt.suite_override = suite;
    opt.seed = seed;

    try {
        const sumlab::JobConfig job = sumlab::load_job(job_path);
        return sumlab::run_job(job, opt);
    } catch (const sumlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
