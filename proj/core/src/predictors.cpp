#include "marlcom/predictors.hpp"

#include <stdexcept>

namespace marlcom {

PredictorNet::PredictorNet(std::string name, std::size_t obs_size, std::size_t act_size,
                           std::size_t latent_size, std::size_t num_agents,
                           DccpConfig comm_cfg, std::size_t hidden_size)
    : obs_size_(obs_size),
      act_size_(act_size),
      latent_(latent_size),
      hidden_(name + ".enc.hidden", obs_size + act_size, hidden_size, Activation::kRelu),
      proj_(name + ".enc.proj", hidden_size, latent_size, Activation::kIdentity),
      comm_(name + ".comm",
            DccpConfig{latent_size, comm_cfg.kernels, comm_cfg.kernel_size}, num_agents) {}

void PredictorNet::init(Rng& rng) {
    hidden_.init(rng);
    proj_.init(rng);
    comm_.init(rng);
}

std::vector<std::vector<double>> PredictorNet::forward(
    const AgentTopology& topo, const std::vector<std::vector<double>>& prev_obs,
    const std::vector<std::vector<double>>& prev_q, Cache& cache) const {
    const std::size_t N = topo.num_agents();
    if (prev_obs.size() != N || prev_q.size() != N) {
        throw std::invalid_argument("predictor: per-agent inputs required");
    }
    cache.hidden.assign(N, {});
    cache.proj.assign(N, {});
    std::vector<std::vector<double>> latents(N);
    std::vector<double> concat(obs_size_ + act_size_);
    for (std::size_t i = 0; i < N; ++i) {
        if (prev_obs[i].size() != obs_size_ || prev_q[i].size() != act_size_) {
            throw std::invalid_argument("predictor: input vector size mismatch");
        }
        std::copy(prev_obs[i].begin(), prev_obs[i].end(), concat.begin());
        std::copy(prev_q[i].begin(), prev_q[i].end(), concat.begin() + obs_size_);
        const auto h = hidden_.forward(concat, cache.hidden[i]);
        latents[i] = proj_.forward(h, cache.proj[i]);
    }
    return comm_.forward(topo, latents, cache.comm);
}

void PredictorNet::backward(const AgentTopology& topo, const Cache& cache,
                            const std::vector<std::vector<double>>& d_out) {
    const auto d_latents = comm_.backward(topo, cache.comm, d_out);
    for (std::size_t i = 0; i < topo.num_agents(); ++i) {
        const auto dh = proj_.backward(cache.proj[i], d_latents[i]);
        hidden_.backward(cache.hidden[i], dh);
    }
}

ParamRefs PredictorNet::params() {
    ParamRefs refs = hidden_.params();
    for (auto* p : proj_.params()) refs.push_back(p);
    for (auto* p : comm_.params()) refs.push_back(p);
    return refs;
}

std::size_t PredictorNet::param_count() {
    return total_params(params());
}

double prediction_loss(const std::vector<std::vector<double>>& pred,
                       const std::vector<std::vector<double>>& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("prediction_loss: agent count mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i].size() != target[i].size()) {
            throw std::invalid_argument("prediction_loss: vector size mismatch");
        }
        for (std::size_t j = 0; j < pred[i].size(); ++j) {
            const double e = pred[i][j] - target[i][j];
            loss += e * e;
        }
    }
    return loss;
}

std::vector<std::vector<double>> prediction_loss_grad(
    const std::vector<std::vector<double>>& pred,
    const std::vector<std::vector<double>>& target, double scale) {
    std::vector<std::vector<double>> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        grad[i].resize(pred[i].size());
        for (std::size_t j = 0; j < pred[i].size(); ++j) {
            grad[i][j] = 2.0 * scale * (pred[i][j] - target[i][j]);
        }
    }
    return grad;
}

}  // namespace marlcom
