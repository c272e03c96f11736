#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marlcom/dccp.hpp"
#include "marlcom/dense.hpp"
#include "marlcom/topology.hpp"

namespace marlcom {

enum class AgentVariant {
    kFull,      // DQN on [o, s_tilde, q_tilde]
    kDccpOnly,  // no mean-field branch: DQN on [o, s_tilde]
    kIql,       // DQN on o only
    kMfq,       // DQN on [o, mean of previous neighbor actions]
};

const char* variant_name(AgentVariant v);
AgentVariant variant_from_name(const std::string& name);

struct VfnConfig {
    std::size_t obs_size = 0;
    std::size_t act_size = 0;
    std::size_t hidden = 64;
    DccpConfig comm;  // kernels/kernel_size for both DCCPs
    AgentVariant variant = AgentVariant::kFull;
};

std::size_t dqn_input_size(const VfnConfig& cfg);

// Value function network: DCCP state estimation over predicted
// observations, enhanced mean-field estimate (neighbor mean of predicted
// Q-values plus a DCCP compensation term), and a DQN head on the
// concatenated input. The head is shared across agents; only the DCCP
// mixing weights are agent-specific. Predictor inputs are treated as
// detached constants: backward touches this net's parameters only.
class VfnNet {
public:
    struct Cache {
        DccpCache se;
        DccpCache me;
        std::vector<DenseCache> h1, h2, out;  // per agent
        std::vector<std::vector<double>> input;
        bool valid = false;
    };

    VfnNet(std::string name, VfnConfig cfg, std::size_t num_agents);

    void init(Rng& rng);

    // s_tilde = DCCP_SE(o_hat); requires a variant with the SE branch.
    std::vector<std::vector<double>> state_estimate(const AgentTopology& topo,
                                                    const std::vector<std::vector<double>>& o_hat,
                                                    Cache& cache) const;

    // q_tilde = mean of neighbors' q_hat + DCCP_ME(q_hat); the mean term
    // is the zero vector for an isolated agent.
    std::vector<std::vector<double>> mean_field_estimate(const AgentTopology& topo,
                                                         const std::vector<std::vector<double>>& q_hat,
                                                         Cache& cache) const;

    // DQN head on the variant's input assembly. aux is the per-agent
    // mean previous-action vector (MFQ variant only).
    std::vector<std::vector<double>> q_values(const AgentTopology& topo,
                                              const std::vector<std::vector<double>>& obs,
                                              const std::vector<std::vector<double>>& s_tilde,
                                              const std::vector<std::vector<double>>& q_tilde,
                                              const std::vector<std::vector<double>>& aux,
                                              Cache& cache) const;

    // Full pass per the variant contract; unused inputs may be empty.
    std::vector<std::vector<double>> forward(const AgentTopology& topo,
                                             const std::vector<std::vector<double>>& obs,
                                             const std::vector<std::vector<double>>& o_hat,
                                             const std::vector<std::vector<double>>& q_hat,
                                             const std::vector<std::vector<double>>& aux,
                                             Cache& cache) const;

    void backward(const AgentTopology& topo, const Cache& cache,
                  const std::vector<std::vector<double>>& dq);

    void copy_values_from(VfnNet& other);

    const VfnConfig& config() const { return cfg_; }
    ParamRefs params();
    std::size_t param_count();

private:
    VfnConfig cfg_;
    std::optional<Dccp> se_comm_;
    std::optional<Dccp> me_comm_;
    DenseLayer h1_;
    DenseLayer h2_;
    DenseLayer out_;
};

// Argmax over unmasked entries, ties toward the lowest index.
// Throws if every entry is masked out.
int greedy_action(std::span<const double> q, const std::vector<bool>* mask = nullptr);

}  // namespace marlcom
