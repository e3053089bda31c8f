// Command-line driver: run registered continuation problems, emit JSONL
// traces and JSON summaries, and run the hypothesis-check bundle.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "davidenko/davidenko.hpp"

namespace {

using namespace davidenko;

void write_summary_file(const nlohmann::json& summary, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open summary file for writing: " + path);
    out << summary.dump(2) << "\n";
}

int list_problems() {
    for (const auto& e : default_registry()) {
        std::string expected = e.expected ? expected_label(*e.expected) : "-";
        std::printf("%-22s %-12s expected: %s\n", e.name.c_str(), kind_label(e.kind),
                    expected.c_str());
    }
    return 0;
}

void print_run_line(const RunResult& rr) {
    std::printf("%-22s %-20s steps=%zu %s\n", rr.name.c_str(), rr.outcome_label.c_str(),
                rr.trace.states.size(), rr.matched ? "ok" : "UNEXPECTED");
}

int run_one(const RegistryEntry& entry, const SolverConfig& cfg, const std::string& trace_path,
            const std::string& summary_path) {
    RunResult rr = run_registry_entry(entry, cfg);
    print_run_line(rr);
    if (!trace_path.empty())
        write_trace_jsonl(rr.trace, trace_path);
    if (!summary_path.empty())
        write_summary_file(rr.summary, summary_path);
    return rr.matched ? 0 : 1;
}

int run_all(const SolverConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (!out_dir.empty())
        fs::create_directories(out_dir);
    const auto& entries = default_registry();
    std::vector<std::future<RunResult>> futures;
    futures.reserve(entries.size());
    for (const auto& e : entries)
        futures.push_back(std::async(std::launch::async,
                                     [&e, &cfg] { return run_registry_entry(e, cfg); }));
    int rc = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        RunResult rr = futures[i].get();
        print_run_line(rr);
        if (!rr.matched) rc = 1;
        if (!out_dir.empty()) {
            fs::path base = fs::path(out_dir) / rr.name;
            write_trace_jsonl(rr.trace, (base.string() + ".trace.jsonl"));
            write_summary_file(rr.summary, (base.string() + ".summary.json"));
        }
    }
    return rc;
}

int check_one(const RegistryEntry& entry, const SolverConfig& cfg) {
    CheckReport rep = check_problem(entry, cfg);
    std::printf("problem: %s\n", rep.name.c_str());
    if (rep.validation.clean()) {
        std::printf("validation: clean\n");
    } else {
        std::printf("validation: %zu violation(s)\n", rep.validation.violations.size());
        for (const auto& v : rep.validation.violations)
            std::printf("  - %s: %s\n", v.code.c_str(), v.message.c_str());
    }
    if (rep.jacobian_error)
        std::printf("jacobian comparison: max relative error %.3e (threshold 1e-4)\n",
                    *rep.jacobian_error);
    else
        std::printf("jacobian comparison: skipped (finite-difference derivatives)\n");
    if (rep.coercivity)
        std::printf("coercivity probe [sampled, not proven]: %s\n",
                    rep.coercivity->pass ? "pass" : "fail");
    else
        std::printf("coercivity probe: skipped (bounded domain)\n");
    std::printf("growth constant estimate [sampled, not proven]: K_hat = %.6g"
                " (singular samples: %d)\n",
                rep.growth.k_hat, rep.growth.singular_samples);
    std::printf("RESULT: %s\n", rep.ok() ? "ok" : "FAILED");
    return rep.ok() ? 0 : 1;
}

int unknown_problem(const std::string& name) {
    std::fprintf(stderr, "unknown problem '%s'; registered problems:\n", name.c_str());
    for (const auto& e : default_registry())
        std::fprintf(stderr, "  %s\n", e.name.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy continuation solver: Davidenko flow with interior-zero /"
                 " boundary-approach classification"};
    app.require_subcommand(1);

    auto* cmd_list = app.add_subcommand("list", "List registered problems");

    auto* cmd_run = app.add_subcommand("run", "Run a registered problem (or all of them)");
    std::string run_name, config_path, trace_path, summary_path, out_dir;
    bool all = false;
    cmd_run->add_option("--problem", run_name, "Problem name");
    cmd_run->add_flag("--all", all, "Run every registered problem");
    cmd_run->add_option("--config", config_path, "JSON solver config");
    cmd_run->add_option("--trace", trace_path, "JSONL trace output path (single problem)");
    cmd_run->add_option("--summary", summary_path, "JSON summary output path (single problem)");
    cmd_run->add_option("--out-dir", out_dir, "Output directory for --all (default: none)");

    auto* cmd_check = app.add_subcommand("check", "Run the hypothesis-check bundle");
    std::string check_name, check_config;
    cmd_check->add_option("--problem", check_name, "Problem name")->required();
    cmd_check->add_option("--config", check_config, "JSON solver config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_list->parsed())
            return list_problems();

        if (cmd_run->parsed()) {
            if (all == !run_name.empty()) {  // exactly one of --all / --problem
                std::fprintf(stderr, "run: give exactly one of --problem NAME or --all\n");
                return 2;
            }
            SolverConfig cfg;
            try {
                if (!config_path.empty()) cfg = load_config(config_path);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "%s\n", e.what());
                return 2;
            }
            if (all)
                return run_all(cfg, out_dir);
            const RegistryEntry* entry = find_problem(run_name);
            if (!entry)
                return unknown_problem(run_name);
            return run_one(*entry, cfg, trace_path, summary_path);
        }

        if (cmd_check->parsed()) {
            SolverConfig cfg;
            try {
                if (!check_config.empty()) cfg = load_config(check_config);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "%s\n", e.what());
                return 2;
            }
            const RegistryEntry* entry = find_problem(check_name);
            if (!entry)
                return unknown_problem(check_name);
            return check_one(*entry, cfg);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
