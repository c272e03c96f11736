#pragma once

#include <string>
#include <vector>

#include "marlcom/param.hpp"
#include "marlcom/rng.hpp"
#include "marlcom/topology.hpp"

namespace marlcom {

struct DccpConfig {
    std::size_t channels = 1;     // M
    std::size_t kernels = 4;      // K per channel
    std::size_t kernel_size = 3;  // n, odd
};

struct DccpCache {
    // per-channel field, zero at empty cells: [M][H*W]
    std::vector<std::vector<double>> field;
    // per-agent per-channel kernel responses: [N][M*K]
    std::vector<std::vector<double>> u;
    bool valid = false;
};

// Depthwise-convolution communication layer: per channel m, K shared
// n x n kernels are convolved over the agent grid around each agent i,
// and the K responses are mixed by the agent's own weight row to give
// z_m^i. Output per agent has exactly M entries, channel by channel.
class Dccp {
public:
    Dccp(std::string name, DccpConfig cfg, std::size_t num_agents);

    // Kernels uniform in +-1/sqrt(n*n); mixing weights start at 1/K.
    void init(Rng& rng);

    // inputs: per-agent M-vectors. Zero padding outside the grid and at
    // cells with no agent.
    std::vector<std::vector<double>> forward(const AgentTopology& topo,
                                             const std::vector<std::vector<double>>& inputs,
                                             DccpCache& cache) const;

    // Accumulates kernel grads (summed over agents; kernels are shared)
    // and per-agent mixing-weight grads; returns input cotangents.
    std::vector<std::vector<double>> backward(const AgentTopology& topo,
                                              const DccpCache& cache,
                                              const std::vector<std::vector<double>>& dz);

    const DccpConfig& config() const { return cfg_; }
    std::size_t num_agents() const { return num_agents_; }
    ParamRefs params() { return {&kernels, &agent_weights}; }

    ParameterBlock kernels;        // [M][K][n][n], shared across agents
    ParameterBlock agent_weights;  // [N][M][K]

private:
    DccpConfig cfg_;
    std::size_t num_agents_;
};

}  // namespace marlcom
