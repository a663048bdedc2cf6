#include "scope/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "scope/rng.hpp"

namespace scope {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError(where + ": unknown field '" + key + "'");
    }
}

std::vector<std::uint64_t> parse_seed_list(const json& j, const std::string& where) {
    std::vector<std::uint64_t> seeds;
    if (j.is_array()) {
        for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
    } else if (j.is_object()) {
        reject_unknown(j, {"count", "start"}, where);
        const auto count = j.at("count").get<std::uint64_t>();
        const auto start = j.value("start", std::uint64_t{1});
        for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(start + i);
    } else {
        throw ConfigError(where + ": expected array or {count, start}");
    }
    if (seeds.empty()) throw ConfigError(where + ": must not be empty");
    return seeds;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("run config: top level must be an object");
    reject_unknown(doc,
                   {"scenes", "seeds", "metric_seeds", "variants", "sensor", "estimator", "validator",
                    "matcher", "policy", "graph", "remote", "targets", "out", "workers", "dump_graph"},
                   "run config");

    RunConfig cfg;

    if (doc.contains("scenes")) {
        const json& js = doc["scenes"];
        reject_unknown(js, {"generate", "files"}, "scenes");
        if (js.contains("files")) {
            cfg.scenes.generate = false;
            for (const auto& f : js["files"]) cfg.scenes.files.push_back(f.get<std::string>());
            if (cfg.scenes.files.empty()) throw ConfigError("scenes.files: must not be empty");
        } else if (js.contains("generate")) {
            const json& jg = js["generate"];
            reject_unknown(jg, {"rooms", "size", "objects_per_room", "goals", "cell_size"}, "scenes.generate");
            cfg.scenes.params.rooms = jg.value("rooms", cfg.scenes.params.rooms);
            cfg.scenes.params.size = jg.value("size", cfg.scenes.params.size);
            cfg.scenes.params.objects_per_room =
                jg.value("objects_per_room", cfg.scenes.params.objects_per_room);
            cfg.scenes.params.goals = jg.value("goals", cfg.scenes.params.goals);
            cfg.scenes.params.cell_size = jg.value("cell_size", cfg.scenes.params.cell_size);
        }
    }

    if (doc.contains("seeds")) cfg.seeds = parse_seed_list(doc["seeds"], "seeds");
    if (doc.contains("metric_seeds")) cfg.metric_seeds = parse_seed_list(doc["metric_seeds"], "metric_seeds");

    if (doc.contains("variants")) {
        cfg.variants.clear();
        for (const auto& v : doc["variants"]) cfg.variants.push_back(variant_from_name(v.get<std::string>()));
        if (cfg.variants.empty()) throw ConfigError("variants: must not be empty");
    }

    if (doc.contains("sensor")) {
        const json& js = doc["sensor"];
        reject_unknown(js, {"range_m", "views", "hfov_deg", "rays_per_view", "frontier_rays"}, "sensor");
        cfg.episode.sensor.range_m = js.value("range_m", cfg.episode.sensor.range_m);
        cfg.episode.sensor.views = js.value("views", cfg.episode.sensor.views);
        cfg.episode.sensor.hfov_deg = js.value("hfov_deg", cfg.episode.sensor.hfov_deg);
        cfg.episode.sensor.rays_per_view = js.value("rays_per_view", cfg.episode.sensor.rays_per_view);
        cfg.episode.sensor.frontier_rays = js.value("frontier_rays", cfg.episode.sensor.frontier_rays);
    }

    if (doc.contains("estimator")) {
        const json& je = doc["estimator"];
        reject_unknown(je, {"type", "sigma", "flip_rate", "sem_cap", "area_cap", "co_cap", "fallback"},
                       "estimator");
        const std::string type = je.value("type", std::string("oracle"));
        if (type == "remote")
            cfg.estimator_kind = EstimatorKind::Remote;
        else if (type != "oracle")
            throw ConfigError("estimator.type: expected 'oracle' or 'remote'");
        cfg.episode.estimator.noise.sigma = je.value("sigma", cfg.episode.estimator.noise.sigma);
        cfg.episode.estimator.noise.flip_rate = je.value("flip_rate", cfg.episode.estimator.noise.flip_rate);
        cfg.episode.estimator.sem_cap = je.value("sem_cap", cfg.episode.estimator.sem_cap);
        cfg.episode.estimator.area_cap = je.value("area_cap", cfg.episode.estimator.area_cap);
        cfg.episode.estimator.co_cap = je.value("co_cap", cfg.episode.estimator.co_cap);
        const std::string fallback = je.value("fallback", std::string("neutral"));
        if (fallback == "neutral")
            cfg.episode.fallback = RemoteFallback::NeutralScore;
        else if (fallback == "fail")
            cfg.episode.fallback = RemoteFallback::FailEpisode;
        else
            throw ConfigError("estimator.fallback: expected 'neutral' or 'fail'");
    }

    if (doc.contains("validator")) {
        const json& jv = doc["validator"];
        reject_unknown(jv, {"type", "fp_rate", "fn_rate"}, "validator");
        const std::string type = jv.value("type", std::string("oracle"));
        if (type == "remote")
            cfg.validator_kind = ValidatorKind::Remote;
        else if (type != "oracle")
            throw ConfigError("validator.type: expected 'oracle' or 'remote'");
        cfg.episode.validator.fp_rate = jv.value("fp_rate", cfg.episode.validator.fp_rate);
        cfg.episode.validator.fn_rate = jv.value("fn_rate", cfg.episode.validator.fn_rate);
    }

    if (doc.contains("matcher")) {
        reject_unknown(doc["matcher"], {"m_err"}, "matcher");
        cfg.episode.matcher.m_err = doc["matcher"].value("m_err", cfg.episode.matcher.m_err);
    }

    if (doc.contains("policy")) {
        const json& jp = doc["policy"];
        reject_unknown(jp, {"retry_limit", "max_steps", "goal_glimpse_bonus", "min_cluster_size"}, "policy");
        cfg.episode.retry_limit = jp.value("retry_limit", cfg.episode.retry_limit);
        cfg.episode.max_steps = jp.value("max_steps", cfg.episode.max_steps);
        cfg.episode.goal_glimpse_bonus = jp.value("goal_glimpse_bonus", cfg.episode.goal_glimpse_bonus);
        cfg.episode.min_cluster_size = jp.value("min_cluster_size", cfg.episode.min_cluster_size);
        if (cfg.episode.retry_limit < 1) throw ConfigError("policy.retry_limit: must be >= 1");
        if (cfg.episode.max_steps < 1) throw ConfigError("policy.max_steps: must be >= 1");
    }

    if (doc.contains("graph")) {
        const bool only_nopg = cfg.variants.size() == 1 && cfg.variants[0] == Variant::NoPotentialGraph;
        if (only_nopg)
            throw ConfigError("graph: NoPotentialGraph runs forbid graph parameter overrides");
        const json& jg = doc["graph"];
        reject_unknown(jg, {"radius_m", "weights", "gamma"}, "graph");
        cfg.episode.graph.radius_m = jg.value("radius_m", cfg.episode.graph.radius_m);
        cfg.episode.graph.gamma = jg.value("gamma", cfg.episode.graph.gamma);
        if (jg.contains("weights")) {
            const json& jw = jg["weights"];
            if (!jw.is_array() || jw.size() != 4)
                throw ConfigError("graph.weights: expected [pot, sem, explore, goal]");
            cfg.episode.graph.weights = {jw[0].get<double>(), jw[1].get<double>(), jw[2].get<double>(),
                                         jw[3].get<double>()};
        }
    }

    if (doc.contains("remote")) {
        const json& jr = doc["remote"];
        reject_unknown(jr, {"endpoint", "timeout_ms", "retries", "max_inflight"}, "remote");
        cfg.remote = RemoteConfig::from_env();
        cfg.remote.endpoint = jr.value("endpoint", cfg.remote.endpoint);
        cfg.remote.timeout_ms = jr.value("timeout_ms", cfg.remote.timeout_ms);
        cfg.remote.retries = jr.value("retries", cfg.remote.retries);
        cfg.remote.max_inflight = jr.value("max_inflight", cfg.remote.max_inflight);
    } else if (cfg.estimator_kind == EstimatorKind::Remote || cfg.validator_kind == ValidatorKind::Remote) {
        cfg.remote = RemoteConfig::from_env();
    }

    if (doc.contains("targets")) {
        const json& jt = doc["targets"];
        reject_unknown(jt, {"min_full_minus_random_sr", "min_full_minus_nopg_sr", "min_seed_agreement"},
                       "targets");
        cfg.targets.min_full_minus_random_sr =
            jt.value("min_full_minus_random_sr", cfg.targets.min_full_minus_random_sr);
        cfg.targets.min_full_minus_nopg_sr =
            jt.value("min_full_minus_nopg_sr", cfg.targets.min_full_minus_nopg_sr);
        cfg.targets.min_seed_agreement = jt.value("min_seed_agreement", cfg.targets.min_seed_agreement);
    }

    cfg.out_dir = doc.value("out", cfg.out_dir);
    cfg.workers = doc.value("workers", cfg.workers);
    cfg.dump_graph = doc.value("dump_graph", cfg.dump_graph);
    return cfg;
}

namespace {

struct Job {
    std::uint64_t scene_seed = 0;
    const SceneMap* scene = nullptr;
    Variant variant = Variant::Full;
    std::uint64_t metric_seed = 0;
};

EpisodeConfig job_episode_config(const RunConfig& cfg, const Job& job,
                                 PotentialEstimator* remote_estimator, ActionValidator* remote_validator) {
    EpisodeConfig ec = cfg.episode;
    ec.variant = job.variant;
    // Noise streams depend on (metric seed, scene seed) but not the variant,
    // so ablations are paired comparisons on identical error draws.
    ec.estimator.noise.seed = mix_keys({job.metric_seed, job.scene_seed, 0x01});
    ec.validator.seed = mix_keys({job.metric_seed, job.scene_seed, 0x02});
    ec.matcher.seed = mix_keys({job.metric_seed, job.scene_seed, 0x03});
    ec.frontier_seed = mix_keys({job.metric_seed, job.scene_seed, 0x04});
    ec.estimator_override = remote_estimator;
    ec.validator_override = remote_validator;
    return ec;
}

}  // namespace

std::string trace_filename(Variant variant, std::uint64_t scene_seed, std::uint64_t metric_seed) {
    std::ostringstream name;
    name << variant_name(variant) << "_s" << scene_seed << "_m" << metric_seed << ".jsonl";
    return name.str();
}

RunResult run_grid(const RunConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("run_grid: empty seed list");

    // Scenes are immutable and shared across variants and metric seeds.
    std::vector<SceneMap> scenes;
    std::vector<std::uint64_t> scene_seeds;
    if (cfg.scenes.generate) {
        for (const std::uint64_t seed : cfg.seeds) {
            scenes.push_back(generate_scene(seed, cfg.scenes.params));
            scene_seeds.push_back(seed);
        }
    } else {
        std::vector<std::string> files = cfg.scenes.files;
        std::sort(files.begin(), files.end());
        for (size_t i = 0; i < files.size(); ++i) {
            std::ifstream in(files[i]);
            if (!in) throw ConfigError("cannot open scene file " + files[i]);
            std::stringstream buf;
            buf << in.rdbuf();
            scenes.push_back(load_scene(buf.str()));
            scene_seeds.push_back(i);
        }
    }

    std::unique_ptr<RemotePotentialEstimator> remote_estimator;
    if (cfg.estimator_kind == EstimatorKind::Remote)
        remote_estimator = std::make_unique<RemotePotentialEstimator>(cfg.remote);
    std::unique_ptr<RemoteValidator> remote_validator;
    if (cfg.validator_kind == ValidatorKind::Remote)
        remote_validator = std::make_unique<RemoteValidator>(cfg.remote);

    // Canonical (seed, variant, metric seed) order.
    std::vector<Job> jobs;
    for (size_t si = 0; si < scenes.size(); ++si) {
        for (const Variant variant : cfg.variants) {
            for (const std::uint64_t ms : cfg.metric_seeds) {
                jobs.push_back({scene_seeds[si], &scenes[si], variant, ms});
            }
        }
    }

    RunResult result;
    result.traces.resize(jobs.size());

    if (cfg.dump_graph) fs::create_directories(fs::path(cfg.out_dir) / "graphs");

    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            EpisodeConfig ec = job_episode_config(cfg, job, remote_estimator.get(), remote_validator.get());
            if (cfg.dump_graph) {
                const std::string stem =
                    variant_name(job.variant) + "_s" + std::to_string(job.scene_seed) + "_m" +
                    std::to_string(job.metric_seed);
                const fs::path graphs_dir = fs::path(cfg.out_dir) / "graphs";
                ec.graph_observer = [graphs_dir, stem](int step, const PotentialGraph& graph) {
                    char suffix[32];
                    std::snprintf(suffix, sizeof(suffix), "_step%04d.csv", step);
                    std::ofstream out(graphs_dir / (stem + suffix), std::ios::binary);
                    out << graph_to_csv(graph);
                };
            }
            result.traces[i] = run_episode(*job.scene, ec, job.scene_seed, job.metric_seed);
        }
    };

    int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    return result;
}

std::vector<VariantMetrics> summarize(const RunResult& result) {
    std::map<Variant, std::map<std::uint64_t, std::vector<EpisodeTrace>>> grouped;
    for (const auto& trace : result.traces) grouped[trace.variant][trace.metric_seed].push_back(trace);

    std::vector<VariantMetrics> out;
    for (auto& [variant, by_seed] : grouped) {
        VariantMetrics vm;
        vm.variant = variant;
        std::vector<EpisodeTrace> pooled;
        for (auto& [seed, traces] : by_seed) {
            const std::vector<EpisodeOutcome> outcomes = collect_outcomes(traces);
            vm.metric_seeds.push_back(seed);
            vm.sr.push_back(success_rate(outcomes));
            vm.spl.push_back(spl(outcomes));
            vm.efficiency.push_back(efficiency(outcomes));
            vm.ece_x100.push_back(ece(outcomes).ece_x100());
            pooled.insert(pooled.end(), traces.begin(), traces.end());
        }
        try {
            vm.recon = reconsideration_stats(pooled);
            vm.has_recon = true;
        } catch (const EmptyInput&) {
            vm.has_recon = false;
        }
        out.push_back(std::move(vm));
    }
    return out;
}

std::string report_csv(const std::vector<VariantMetrics>& metrics) {
    std::ostringstream out;
    out << "variant,metric,mean,std\n";
    for (const auto& vm : metrics) {
        const auto row = [&](const char* name, const std::vector<double>& values) {
            out << variant_name(vm.variant) << "," << name << "," << format_value(mean(values)) << ","
                << format_value(sample_stddev(values)) << "\n";
        };
        row("sr", vm.sr);
        row("spl", vm.spl);
        row("efficiency", vm.efficiency);
        row("ece_x100", vm.ece_x100);
        if (vm.has_recon) {
            out << variant_name(vm.variant) << ",confirm_precision,"
                << format_value(vm.recon.confirm_precision) << ",0.000000\n";
            out << variant_name(vm.variant) << ",forced_error_rate,"
                << format_value(vm.recon.forced_error_rate) << ",0.000000\n";
            out << variant_name(vm.variant) << ",memory_execution_precision,"
                << format_value(vm.recon.memory_execution_precision) << ",0.000000\n";
        }
    }
    return out.str();
}

std::string report_long_csv(const std::vector<VariantMetrics>& metrics) {
    std::ostringstream out;
    out << "variant,metric_seed,metric,value\n";
    for (const auto& vm : metrics) {
        for (size_t i = 0; i < vm.metric_seeds.size(); ++i) {
            const auto row = [&](const char* name, double v) {
                out << variant_name(vm.variant) << "," << vm.metric_seeds[i] << "," << name << ","
                    << format_value(v) << "\n";
            };
            row("sr", vm.sr[i]);
            row("spl", vm.spl[i]);
            row("efficiency", vm.efficiency[i]);
            row("ece_x100", vm.ece_x100[i]);
        }
    }
    return out.str();
}

namespace {

const VariantMetrics* find_variant(const std::vector<VariantMetrics>& metrics, Variant v) {
    for (const auto& vm : metrics) {
        if (vm.variant == v) return &vm;
    }
    return nullptr;
}

int seeds_where_greater(const std::vector<double>& a, const std::vector<double>& b) {
    int n = 0;
    for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) n += a[i] > b[i] ? 1 : 0;
    return n;
}

}  // namespace

std::string report_json(const std::vector<VariantMetrics>& metrics, const AblationTargets* targets) {
    json doc;
    for (const auto& vm : metrics) {
        json jv;
        const auto block = [](const std::vector<double>& values) {
            json b;
            b["mean"] = mean(values);
            b["std"] = sample_stddev(values);
            b["per_seed"] = values;
            return b;
        };
        jv["sr"] = block(vm.sr);
        jv["spl"] = block(vm.spl);
        jv["efficiency"] = block(vm.efficiency);
        jv["ece_x100"] = block(vm.ece_x100);
        jv["metric_seeds"] = vm.metric_seeds;
        if (vm.has_recon) {
            jv["confirm_precision"] = vm.recon.confirm_precision;
            jv["forced_error_rate"] = vm.recon.forced_error_rate;
            jv["memory_execution_precision"] = vm.recon.memory_execution_precision;
            jv["confirmed_executions"] = vm.recon.confirmed_executions;
            jv["forced_executions"] = vm.recon.forced_executions;
            jv["memory_executions"] = vm.recon.memory_executions;
        }
        doc["variants"][variant_name(vm.variant)] = std::move(jv);
    }

    const VariantMetrics* full = find_variant(metrics, Variant::Full);
    if (full != nullptr) {
        for (const auto& vm : metrics) {
            if (vm.variant == Variant::Full || vm.sr.size() < 2 || full->sr.size() < 2) continue;
            const TTestResult tt = welch_t_test(full->sr, vm.sr);
            json jt;
            jt["t"] = tt.t;
            jt["df"] = tt.df;
            jt["p"] = tt.p;
            doc["t_tests"]["full_vs_" + variant_name(vm.variant)] = std::move(jt);
        }
    }

    if (targets != nullptr && full != nullptr) {
        json jt;
        const auto compare = [&](Variant v, double min_gap, const char* name) {
            const VariantMetrics* vm = find_variant(metrics, v);
            if (vm == nullptr) return;
            json jc;
            const double gap = mean(full->sr) - mean(vm->sr);
            const int agree = seeds_where_greater(full->sr, vm->sr);
            jc["mean_sr_gap"] = gap;
            jc["min_gap"] = min_gap;
            jc["seeds_in_direction"] = agree;
            jc["min_seed_agreement"] = targets->min_seed_agreement;
            jc["met"] = gap >= min_gap && agree >= targets->min_seed_agreement;
            jt[name] = std::move(jc);
        };
        compare(Variant::RandomFrontier, targets->min_full_minus_random_sr, "full_vs_random_frontier");
        compare(Variant::NoPotentialGraph, targets->min_full_minus_nopg_sr, "full_vs_no_potential_graph");
        doc["targets"] = std::move(jt);
    }

    return doc.dump(2) + "\n";
}

std::string build_manifest(const RunConfig& cfg) {
    json doc;
    doc["artifact_version"] = kArtifactVersion;
    if (cfg.scenes.generate) {
        json jg;
        jg["rooms"] = cfg.scenes.params.rooms;
        jg["size"] = cfg.scenes.params.size;
        jg["objects_per_room"] = cfg.scenes.params.objects_per_room;
        jg["goals"] = cfg.scenes.params.goals;
        jg["cell_size"] = cfg.scenes.params.cell_size;
        doc["scenes"]["generate"] = std::move(jg);
    } else {
        doc["scenes"]["files"] = cfg.scenes.files;
    }
    doc["seeds"] = cfg.seeds;
    doc["metric_seeds"] = cfg.metric_seeds;
    json variants = json::array();
    for (const Variant v : cfg.variants) variants.push_back(variant_name(v));
    doc["variants"] = std::move(variants);

    doc["sensor"] = {{"range_m", cfg.episode.sensor.range_m},
                     {"views", cfg.episode.sensor.views},
                     {"hfov_deg", cfg.episode.sensor.hfov_deg},
                     {"rays_per_view", cfg.episode.sensor.rays_per_view},
                     {"frontier_rays", cfg.episode.sensor.frontier_rays}};
    doc["estimator"] = {{"type", cfg.estimator_kind == EstimatorKind::Remote ? "remote" : "oracle"},
                        {"sigma", cfg.episode.estimator.noise.sigma},
                        {"flip_rate", cfg.episode.estimator.noise.flip_rate},
                        {"sem_cap", cfg.episode.estimator.sem_cap},
                        {"area_cap", cfg.episode.estimator.area_cap},
                        {"co_cap", cfg.episode.estimator.co_cap},
                        {"fallback", cfg.episode.fallback == RemoteFallback::NeutralScore ? "neutral" : "fail"}};
    doc["validator"] = {{"type", cfg.validator_kind == ValidatorKind::Remote ? "remote" : "oracle"},
                        {"fp_rate", cfg.episode.validator.fp_rate},
                        {"fn_rate", cfg.episode.validator.fn_rate}};
    doc["matcher"] = {{"m_err", cfg.episode.matcher.m_err}};
    doc["policy"] = {{"retry_limit", cfg.episode.retry_limit},
                     {"max_steps", cfg.episode.max_steps},
                     {"goal_glimpse_bonus", cfg.episode.goal_glimpse_bonus},
                     {"min_cluster_size", cfg.episode.min_cluster_size}};
    if (!(cfg.variants.size() == 1 && cfg.variants[0] == Variant::NoPotentialGraph)) {
        doc["graph"] = {{"radius_m", cfg.episode.graph.radius_m},
                        {"weights",
                         {cfg.episode.graph.weights.pot, cfg.episode.graph.weights.sem,
                          cfg.episode.graph.weights.explore, cfg.episode.graph.weights.goal}},
                        {"gamma", cfg.episode.graph.gamma}};
    }
    doc["targets"] = {{"min_full_minus_random_sr", cfg.targets.min_full_minus_random_sr},
                      {"min_full_minus_nopg_sr", cfg.targets.min_full_minus_nopg_sr},
                      {"min_seed_agreement", cfg.targets.min_seed_agreement}};
    return doc.dump(2) + "\n";
}

void write_run_outputs(const RunConfig& cfg, const RunResult& result) {
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir / "traces");

    std::ofstream manifest(out_dir / "manifest.json", std::ios::binary);
    manifest << build_manifest(cfg);
    manifest.close();

    for (const auto& trace : result.traces) {
        const fs::path path =
            out_dir / "traces" / trace_filename(trace.variant, trace.scene_seed, trace.metric_seed);
        std::ofstream out(path, std::ios::binary);
        out << trace_to_jsonl(trace);
    }

    const std::vector<VariantMetrics> metrics = summarize(result);
    {
        std::ofstream out(out_dir / "report.csv", std::ios::binary);
        out << report_csv(metrics);
    }
    {
        std::ofstream out(out_dir / "report_long.csv", std::ios::binary);
        out << report_long_csv(metrics);
    }
    {
        std::ofstream out(out_dir / "report.json", std::ios::binary);
        out << report_json(metrics, &cfg.targets);
    }
}

std::vector<EpisodeTrace> read_trace_dir(const std::string& dir) {
    std::vector<std::string> files;
    if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
                files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw EmptyInput("no .jsonl traces under " + dir);

    std::vector<EpisodeTrace> traces;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        traces.push_back(trace_from_jsonl(buf.str()));
    }
    return traces;
}

}  // namespace scope
