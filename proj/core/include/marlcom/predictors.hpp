#pragma once

#include <string>
#include <vector>

#include "marlcom/dccp.hpp"
#include "marlcom/dense.hpp"
#include "marlcom/topology.hpp"

namespace marlcom {

// Shared encoder (one relu hidden layer then a linear projection)
// followed by a DCCP with as many channels as the latent size. PRN uses
// latent == action size and predicts real-time Q-values; OPN uses
// latent == observation size and predicts the real-time observation.
class PredictorNet {
public:
    struct Cache {
        std::vector<DenseCache> hidden;  // per agent
        std::vector<DenseCache> proj;
        DccpCache comm;
    };

    PredictorNet(std::string name, std::size_t obs_size, std::size_t act_size,
                 std::size_t latent_size, std::size_t num_agents,
                 DccpConfig comm_cfg, std::size_t hidden_size = 32);

    void init(Rng& rng);

    // prev_obs: per-agent D_o vectors, prev_q: per-agent |A| vectors
    // (zeros at t=0). Returns per-agent latent-sized predictions.
    std::vector<std::vector<double>> forward(const AgentTopology& topo,
                                             const std::vector<std::vector<double>>& prev_obs,
                                             const std::vector<std::vector<double>>& prev_q,
                                             Cache& cache) const;

    // Accumulates into this net's own parameter grads only.
    void backward(const AgentTopology& topo, const Cache& cache,
                  const std::vector<std::vector<double>>& d_out);

    ParamRefs params();
    std::size_t latent_size() const { return latent_; }
    std::size_t param_count();

private:
    std::size_t obs_size_;
    std::size_t act_size_;
    std::size_t latent_;
    DenseLayer hidden_;
    DenseLayer proj_;
    Dccp comm_;
};

// Sum over agents of squared Euclidean prediction error.
double prediction_loss(const std::vector<std::vector<double>>& pred,
                       const std::vector<std::vector<double>>& target);

// d(loss)/d(pred) = 2 (pred - target), optionally scaled.
std::vector<std::vector<double>> prediction_loss_grad(
    const std::vector<std::vector<double>>& pred,
    const std::vector<std::vector<double>>& target, double scale = 1.0);

}  // namespace marlcom
