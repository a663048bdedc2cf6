// Command-line entry point: scene generation, batch runs, reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scope/runner.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw scope::ConfigError("cannot open file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint64_t> parse_seed_flag(const std::string& flag) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find("..");
        if (dash != std::string::npos) {
            const std::uint64_t lo = std::stoull(item.substr(0, dash));
            const std::uint64_t hi = std::stoull(item.substr(dash + 2));
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else if (!item.empty()) {
            seeds.push_back(std::stoull(item));
        }
    }
    return seeds;
}

int cmd_gen(const std::string& seeds_flag, const scope::GenParams& params, const std::string& out_dir) {
    const std::vector<std::uint64_t> seeds = parse_seed_flag(seeds_flag);
    if (seeds.empty()) {
        std::cerr << "gen: no seeds given\n";
        return 2;
    }
    fs::create_directories(out_dir);
    for (const std::uint64_t seed : seeds) {
        const scope::SceneMap map = scope::generate_scene(seed, params);
        const fs::path path = fs::path(out_dir) / ("scene_" + std::to_string(seed) + ".json");
        std::ofstream out(path, std::ios::binary);
        out << scope::save_scene(map);
        std::cout << path.string() << "\n";
    }
    return 0;
}

int cmd_validate(const std::vector<std::string>& files) {
    int failures = 0;
    for (const auto& file : files) {
        try {
            scope::load_scene(read_file(file));
            std::cout << file << ": ok\n";
        } catch (const std::exception& e) {
            std::cout << file << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& seeds_flag, const std::string& variant_flag,
            int workers, const std::string& out_dir) {
    scope::RunConfig cfg =
        config_path.empty() ? scope::RunConfig{} : scope::parse_run_config(read_file(config_path));
    if (!seeds_flag.empty()) cfg.seeds = parse_seed_flag(seeds_flag);
    if (!variant_flag.empty()) cfg.variants = {scope::variant_from_name(variant_flag)};
    if (workers >= 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    const scope::RunResult result = scope::run_grid(cfg);
    scope::write_run_outputs(cfg, result);

    const auto metrics = scope::summarize(result);
    std::cout << scope::report_csv(metrics);
    std::cout << "outputs written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_report(const std::string& traces_dir, const std::string& format, const std::string& out_dir) {
    const std::vector<scope::EpisodeTrace> traces = scope::read_trace_dir(traces_dir);
    scope::RunResult result{traces};
    const auto metrics = scope::summarize(result);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "report.csv", std::ios::binary) << scope::report_csv(metrics);
        std::ofstream(fs::path(out_dir) / "report_long.csv", std::ios::binary)
            << scope::report_long_csv(metrics);
        std::ofstream(fs::path(out_dir) / "report.json", std::ios::binary)
            << scope::report_json(metrics, nullptr);
    }
    if (format == "json")
        std::cout << scope::report_json(metrics, nullptr);
    else
        std::cout << scope::report_csv(metrics);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frontier-potential exploration harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate scene files");
    std::string gen_seeds = "1..10";
    scope::GenParams params;
    std::string gen_out = "scenes";
    gen->add_option("--seeds", gen_seeds, "seed list, e.g. 1,2,5 or 1..100");
    gen->add_option("--rooms", params.rooms, "rooms per scene");
    gen->add_option("--size", params.size, "cells per side");
    gen->add_option("--objects-per-room", params.objects_per_room, "objects per room");
    gen->add_option("--goals", params.goals, "goals per scene");
    gen->add_option("--cell-size", params.cell_size, "meters per cell");
    gen->add_option("--out", gen_out, "output directory");

    auto* validate = app.add_subcommand("validate", "check scene files against every invariant");
    std::vector<std::string> validate_files;
    validate->add_option("files", validate_files, "scene files")->required();

    auto* run = app.add_subcommand("run", "run a seed x variant episode grid");
    std::string run_config;
    std::string run_seeds;
    std::string run_variant;
    int run_workers = -1;
    std::string run_out;
    run->add_option("--config", run_config, "JSON run configuration");
    run->add_option("--seeds", run_seeds, "override scene seeds");
    run->add_option("--variant", run_variant, "override variants with a single variant");
    run->add_option("--workers", run_workers, "worker threads (0 = hardware)");
    run->add_option("--out", run_out, "output directory");

    auto* report = app.add_subcommand("report", "recompute metrics from trace files");
    std::string report_traces;
    std::string report_format = "csv";
    std::string report_out;
    report->add_option("--traces", report_traces, "directory of .jsonl traces")->required();
    report->add_option("--format", report_format, "stdout format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    report->add_option("--out", report_out, "also write report files here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_seeds, params, gen_out);
        if (validate->parsed()) return cmd_validate(validate_files);
        if (run->parsed()) return cmd_run(run_config, run_seeds, run_variant, run_workers, run_out);
        if (report->parsed()) return cmd_report(report_traces, report_format, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
