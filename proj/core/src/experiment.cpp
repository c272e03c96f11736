#include "marlcom/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "marlcom/checkpoint.hpp"

namespace marlcom {

namespace fs = std::filesystem;

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.env_spec = j.at("env");
    cfg.variant = variant_from_name(j.value("variant", "full"));
    if (j.contains("hyper")) cfg.hp = HyperParams::from_json(j.at("hyper"));
    if (j.contains("net")) cfg.net = NetConfig::from_json(j.at("net"));
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.train_steps = j.value("train_steps", cfg.train_steps);
    cfg.eval_every = j.value("eval_every", cfg.eval_every);
    cfg.eval_episodes = j.value("eval_episodes", cfg.eval_episodes);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (cfg.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
    if (cfg.train_steps < 0 || cfg.eval_every < 1 || cfg.eval_episodes < 1) {
        throw std::invalid_argument("invalid run config");
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json RunConfig::to_json() const {
    return {{"env", env_spec},
            {"variant", variant_name(variant)},
            {"hyper", hp.to_json()},
            {"net", net.to_json()},
            {"seeds", seeds},
            {"train_steps", train_steps},
            {"eval_every", eval_every},
            {"eval_episodes", eval_episodes},
            {"out_dir", out_dir}};
}

std::string RunConfig::hash() const {
    // nlohmann::json keeps object keys sorted, so dump() is canonical.
    // out_dir is where results land, not what the experiment is: two runs
    // of the same experiment into different directories share a hash.
    nlohmann::json j = to_json();
    j.erase("out_dir");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t eval_seed_base(std::uint64_t run_seed) {
    return run_seed * 1000003ull + 7919ull;
}

SeedStats aggregate(const std::vector<double>& per_seed) {
    SeedStats s;
    const double n = static_cast<double>(per_seed.size());
    for (double v : per_seed) s.mean += v;
    s.mean /= n;
    if (per_seed.size() > 1) {
        double ss = 0.0;
        for (double v : per_seed) ss += (v - s.mean) * (v - s.mean);
        s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json run_experiment(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string hash = cfg.hash();
    const fs::path base = fs::path(cfg.out_dir) / hash;
    fs::create_directories(base);
    {
        std::ofstream cf(base / "config.json");
        cf << cfg.to_json().dump(2) << "\n";
    }

    std::map<std::string, std::vector<double>> finals;
    nlohmann::json per_seed = nlohmann::json::array();

    for (std::uint64_t seed : cfg.seeds) {
        const fs::path seed_dir = base / ("seed_" + std::to_string(seed));
        fs::create_directories(seed_dir);
        std::ofstream csv(seed_dir / "metrics.csv");
        csv << "run_id,seed,step,metric,value\n";

        Trainer trainer(cfg.env_spec, cfg.variant, cfg.net, cfg.hp, seed);
        EvalMetrics last;
        const auto do_eval = [&](long step) {
            last = trainer.evaluate(cfg.eval_episodes, eval_seed_base(seed));
            for (const auto& [k, v] : last.values) {
                csv << hash << ',' << seed << ',' << step << ',' << k << ','
                    << format_double(v) << "\n";
            }
            std::cerr << "[" << hash.substr(0, 8) << " seed " << seed << "] step " << step;
            for (const auto& [k, v] : last.values) std::cerr << "  " << k << "=" << v;
            std::cerr << "\n";
        };

        do_eval(0);
        for (long step = 1; step <= cfg.train_steps; ++step) {
            trainer.step(cfg.train_steps);
            if (step % cfg.eval_every == 0 || step == cfg.train_steps) do_eval(step);
        }

        save_checkpoint((seed_dir / "ckpt_final").string(), trainer.checkpoint_params(),
                        {{"config_hash", hash},
                         {"seed", seed},
                         {"variant", variant_name(cfg.variant)}});

        nlohmann::json seed_json = {{"seed", seed}, {"final", nlohmann::json::object()}};
        for (const auto& [k, v] : last.values) {
            finals[k].push_back(v);
            seed_json["final"][k] = v;
        }
        per_seed.push_back(std::move(seed_json));
    }

    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json summary = {{"config_hash", hash},
                              {"variant", variant_name(cfg.variant)},
                              {"config", cfg.to_json()},
                              {"seeds", cfg.seeds},
                              {"per_seed", per_seed},
                              {"wall_time_s", wall_s},
                              {"metrics", nlohmann::json::object()}};
    for (const auto& [k, values] : finals) {
        const SeedStats s = aggregate(values);
        summary["metrics"][k] = {{"mean", s.mean}, {"stderr", s.stderr_}, {"per_seed", values}};
    }
    std::ofstream sf(base / "summary.json");
    sf << summary.dump(2) << "\n";
    return summary;
}

nlohmann::json compare_summaries(const std::vector<nlohmann::json>& summaries,
                                 const std::string& metric) {
    if (summaries.size() < 2) throw std::invalid_argument("compare needs at least two summaries");
    struct Entry {
        std::string label;
        double mean;
        double se;
    };
    std::vector<Entry> entries;
    for (const auto& s : summaries) {
        if (!s.at("metrics").contains(metric)) {
            throw std::invalid_argument("summary for " + s.value("variant", std::string("?")) +
                                        " is missing metric '" + metric + "'");
        }
        const auto& m = s.at("metrics").at(metric);
        entries.push_back({s.value("variant", s.value("config_hash", std::string("run"))),
                           m.at("mean").get<double>(), m.at("stderr").get<double>()});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.mean < b.mean; });

    nlohmann::json report = {{"metric", metric}, {"ranking", nlohmann::json::array()}};
    bool any_tie = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        nlohmann::json e = {{"variant", entries[i].label},
                            {"mean", entries[i].mean},
                            {"stderr", entries[i].se}};
        if (i + 1 < entries.size()) {
            const double diff = entries[i + 1].mean - entries[i].mean;
            const double se_diff = std::sqrt(entries[i].se * entries[i].se +
                                             entries[i + 1].se * entries[i + 1].se);
            e["separated_from_next"] = diff > se_diff;
            if (diff == 0.0) any_tie = true;
        }
        report["ranking"].push_back(std::move(e));
    }
    report["tie"] = any_tie;
    return report;
}

nlohmann::json evaluate_checkpoint(const RunConfig& cfg, const std::string& ckpt_prefix,
                                   std::uint64_t seed) {
    Trainer trainer(cfg.env_spec, cfg.variant, cfg.net, cfg.hp, seed);
    const nlohmann::json meta = load_checkpoint(ckpt_prefix, trainer.checkpoint_params());
    trainer.target_vfn().copy_values_from(trainer.vfn());
    const EvalMetrics m = trainer.evaluate(cfg.eval_episodes, eval_seed_base(seed));
    nlohmann::json out = {{"checkpoint", ckpt_prefix},
                          {"seed", seed},
                          {"metadata", meta},
                          {"metrics", nlohmann::json::object()}};
    for (const auto& [k, v] : m.values) out["metrics"][k] = v;
    return out;
}

}  // namespace marlcom
