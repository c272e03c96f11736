#pragma once

#include <optional>

#include "marlcom/env.hpp"
#include "marlcom/rng.hpp"

namespace marlcom {

// Parity task where communication is required: each agent holds a hidden
// bit sampled at reset and observes only its own bit; the rewarded action
// is the XOR of the bits over the agent and its grid neighbors.
class SyncGrid final : public Env {
public:
    struct Config {
        int height = 3;
        int width = 3;
        int horizon = 8;

        static Config from_json(const nlohmann::json& spec);
        nlohmann::json to_json() const;
    };

    explicit SyncGrid(Config cfg);

    std::vector<std::vector<double>> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<int>& actions) override;

    const AgentTopology& topology() const override { return topo_; }
    std::size_t obs_size() const override { return 1; }
    std::size_t action_size() const override { return 2; }
    bool timeout_is_terminal() const override { return true; }

    const std::vector<int>& bits() const { return bits_; }
    const std::vector<int>& parities() const { return parities_; }
    const Config& config() const { return cfg_; }

private:
    std::vector<std::vector<double>> observations() const;

    Config cfg_;
    AgentTopology topo_;
    std::vector<int> bits_;
    std::vector<int> parities_;
    int step_ = 0;
    bool done_ = true;
};

}  // namespace marlcom
