#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "marlcom/topology.hpp"

namespace marlcom {

struct StepResult {
    std::vector<std::vector<double>> obs;
    std::vector<double> rewards;
    bool done = false;
};

// Shared environment contract: step is only valid between reset and done;
// observations have fixed length obs_size, rewards are finite.
class Env {
public:
    virtual ~Env() = default;

    virtual std::vector<std::vector<double>> reset(std::uint64_t seed) = 0;
    virtual StepResult step(const std::vector<int>& actions) = 0;

    virtual const AgentTopology& topology() const = 0;
    virtual std::size_t obs_size() const = 0;
    virtual std::size_t action_size() const = 0;

    // Whether reaching the episode horizon counts as a terminal state for
    // bootstrapping (true) or as a time limit (false).
    virtual bool timeout_is_terminal() const = 0;

    // Domain metrics sampled after each step (e.g. queue lengths).
    virtual std::map<std::string, double> step_metrics() const { return {}; }
    virtual nlohmann::json state_summary() const { return nlohmann::json::object(); }
};

// spec: {"name": "traffic_grid_lite" | "sync_grid", ...params}
std::unique_ptr<Env> make_env(const nlohmann::json& spec);

}  // namespace marlcom
