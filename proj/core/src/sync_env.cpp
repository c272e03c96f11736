#include "marlcom/sync_env.hpp"

#include <stdexcept>

namespace marlcom {

SyncGrid::Config SyncGrid::Config::from_json(const nlohmann::json& spec) {
    Config cfg;
    cfg.height = spec.value("height", cfg.height);
    cfg.width = spec.value("width", cfg.width);
    cfg.horizon = spec.value("horizon", cfg.horizon);
    return cfg;
}

nlohmann::json SyncGrid::Config::to_json() const {
    return {{"name", "sync_grid"}, {"height", height}, {"width", width}, {"horizon", horizon}};
}

SyncGrid::SyncGrid(Config cfg) : cfg_(cfg) {
    if (cfg_.height < 1 || cfg_.width < 1 || cfg_.horizon < 1) {
        throw std::invalid_argument("sync_grid: invalid configuration");
    }
    topo_ = AgentTopology::full_grid(cfg_.height, cfg_.width);
}

std::vector<std::vector<double>> SyncGrid::reset(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = topo_.num_agents();
    bits_.resize(n);
    for (int& b : bits_) b = rng.bernoulli(0.5) ? 1 : 0;
    parities_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int p = bits_[i];
        for (int j : topo_.neighbors[i]) p ^= bits_[j];
        parities_[i] = p;
    }
    step_ = 0;
    done_ = false;
    return observations();
}

StepResult SyncGrid::step(const std::vector<int>& actions) {
    if (done_) throw std::logic_error("sync_grid: step after done");
    if (actions.size() != topo_.num_agents()) {
        throw std::invalid_argument("sync_grid: one action per agent required");
    }
    StepResult result;
    result.rewards.resize(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] != 0 && actions[i] != 1) throw std::invalid_argument("sync_grid: binary actions only");
        result.rewards[i] = actions[i] == parities_[i] ? 1.0 : 0.0;
    }
    ++step_;
    result.obs = observations();
    result.done = step_ >= cfg_.horizon;
    done_ = result.done;
    return result;
}

std::vector<std::vector<double>> SyncGrid::observations() const {
    std::vector<std::vector<double>> obs(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) obs[i] = {static_cast<double>(bits_[i])};
    return obs;
}

}  // namespace marlcom
