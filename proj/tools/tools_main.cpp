#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "marlcom/experiment.hpp"
#include "marlcom/verification.hpp"

namespace {

using nlohmann::json;

int print_suite(const marlcom::CheckSuite& suite) {
    for (const auto& c : suite.checks) {
        std::printf("[%s] %s/%s: value=%.3e threshold=%.3e\n",
                    c.pass ? "PASS" : "FAIL", suite.name.c_str(), c.name.c_str(),
                    c.value, c.threshold);
    }
    return suite.all_pass() ? 0 : 1;
}

marlcom::RunConfig load_config(const std::string& path,
                               const std::optional<std::uint64_t>& seed,
                               const std::optional<std::string>& out,
                               const std::optional<long>& steps) {
    auto cfg = marlcom::RunConfig::from_file(path);
    if (seed) cfg.seeds = {*seed};
    if (out) cfg.out_dir = *out;
    if (steps) cfg.train_steps = *steps;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent deep Q-learning with convolutional communication"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<long> steps;
    std::string config_path, ckpt_prefix, metric = "mean_reward";
    std::vector<std::string> summary_paths;

    auto* train = app.add_subcommand("train", "train per a run config, write metrics + checkpoints");
    train->add_option("config", config_path, "run config JSON")->required()->check(CLI::ExistingFile);
    train->add_option("--seed", seed, "override: train this single seed");
    train->add_option("--out", out, "override output directory");
    train->add_option("--steps", steps, "override training steps");

    auto* evaluate = app.add_subcommand("evaluate", "re-evaluate a saved checkpoint");
    evaluate->add_option("checkpoint", ckpt_prefix, "checkpoint prefix (no extension)")->required();
    evaluate->add_option("config", config_path, "run config JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--seed", seed, "run seed the checkpoint was trained with");

    auto* compare = app.add_subcommand("compare", "rank run summaries by a metric");
    compare->add_option("summaries", summary_paths, "summary.json files")->required()->expected(-2);
    compare->add_option("--metric", metric, "metric name (default mean_reward)");

    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
    auto* oracle = app.add_subcommand("oracle", "convolution and mean-field numerical oracles");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            const auto cfg = load_config(config_path, seed, out, steps);
            const auto summary = marlcom::run_experiment(cfg);
            std::cout << summary.dump(2) << "\n";
            return 0;
        }
        if (*evaluate) {
            const auto cfg = load_config(config_path, std::nullopt, out, steps);
            const std::uint64_t s = seed.value_or(cfg.seeds.empty() ? 1 : cfg.seeds.front());
            const auto metrics = marlcom::evaluate_checkpoint(cfg, ckpt_prefix, s);
            std::cout << metrics.dump(2) << "\n";
            return 0;
        }
        if (*compare) {
            std::vector<json> summaries;
            for (const auto& p : summary_paths) {
                std::ifstream in(p);
                if (!in) throw std::runtime_error("cannot open " + p);
                summaries.push_back(json::parse(in));
            }
            const auto ranking = marlcom::compare_summaries(summaries, metric);
            std::cout << ranking.dump(2) << "\n";
            return 0;
        }
        if (*gradcheck) return print_suite(marlcom::gradient_suite());
        if (*oracle) {
            const int a = print_suite(marlcom::convolution_oracle_suite());
            const int b = print_suite(marlcom::mean_field_oracle_suite());
            return (a || b) ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
