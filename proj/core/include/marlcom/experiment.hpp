#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "marlcom/trainer.hpp"

namespace marlcom {

// Configuration-driven experiment: one config, many seeds. Every output
// artifact embeds the config hash so distinct configs never collide.
struct RunConfig {
    nlohmann::json env_spec;
    AgentVariant variant = AgentVariant::kFull;
    HyperParams hp;
    NetConfig net;
    std::vector<std::uint64_t> seeds = {1};
    long train_steps = 10000;
    long eval_every = 2000;
    int eval_episodes = 10;
    std::string out_dir = "runs";

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
    std::string hash() const;  // FNV-1a over the canonical serialization
};

// Evaluation seeds depend on the run seed and episode index only, so a
// reloaded checkpoint reproduces evaluation metrics exactly.
std::uint64_t eval_seed_base(std::uint64_t run_seed);

struct SeedStats {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample stddev / sqrt(n)
};
SeedStats aggregate(const std::vector<double>& per_seed);

// Trains and evaluates every seed sequentially; writes per-seed metric
// CSVs and checkpoints plus a summary JSON under out_dir/<hash>/.
// Returns the summary.
nlohmann::json run_experiment(const RunConfig& cfg);

// Ranks run summaries by mean of the metric (ascending) and flags
// whether adjacent means are separated beyond one standard error of the
// difference.
nlohmann::json compare_summaries(const std::vector<nlohmann::json>& summaries,
                                 const std::string& metric);

// Rebuilds the nets from the config, loads the checkpoint, and
// re-evaluates; metrics match those logged when the checkpoint was saved.
nlohmann::json evaluate_checkpoint(const RunConfig& cfg, const std::string& ckpt_prefix,
                                   std::uint64_t seed);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace marlcom
