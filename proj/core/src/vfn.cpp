#include "marlcom/vfn.hpp"

#include <stdexcept>

namespace marlcom {

const char* variant_name(AgentVariant v) {
    switch (v) {
        case AgentVariant::kFull: return "full";
        case AgentVariant::kDccpOnly: return "dccp_only";
        case AgentVariant::kIql: return "iql";
        case AgentVariant::kMfq: return "mfq";
    }
    return "?";
}

AgentVariant variant_from_name(const std::string& name) {
    if (name == "full") return AgentVariant::kFull;
    if (name == "dccp_only") return AgentVariant::kDccpOnly;
    if (name == "iql") return AgentVariant::kIql;
    if (name == "mfq") return AgentVariant::kMfq;
    throw std::invalid_argument("unknown agent variant '" + name + "'");
}

std::size_t dqn_input_size(const VfnConfig& cfg) {
    switch (cfg.variant) {
        case AgentVariant::kFull: return 2 * cfg.obs_size + cfg.act_size;
        case AgentVariant::kDccpOnly: return 2 * cfg.obs_size;
        case AgentVariant::kIql: return cfg.obs_size;
        case AgentVariant::kMfq: return cfg.obs_size + cfg.act_size;
    }
    return 0;
}

VfnNet::VfnNet(std::string name, VfnConfig cfg, std::size_t num_agents)
    : cfg_(cfg),
      h1_(name + ".dqn.h1", dqn_input_size(cfg), cfg.hidden, Activation::kRelu),
      h2_(name + ".dqn.h2", cfg.hidden, cfg.hidden, Activation::kRelu),
      out_(name + ".dqn.out", cfg.hidden, cfg.act_size, Activation::kIdentity) {
    const bool has_se = cfg.variant == AgentVariant::kFull || cfg.variant == AgentVariant::kDccpOnly;
    const bool has_me = cfg.variant == AgentVariant::kFull;
    if (has_se) {
        se_comm_.emplace(name + ".se",
                         DccpConfig{cfg.obs_size, cfg.comm.kernels, cfg.comm.kernel_size},
                         num_agents);
    }
    if (has_me) {
        me_comm_.emplace(name + ".me",
                         DccpConfig{cfg.act_size, cfg.comm.kernels, cfg.comm.kernel_size},
                         num_agents);
    }
}

void VfnNet::init(Rng& rng) {
    if (se_comm_) se_comm_->init(rng);
    if (me_comm_) me_comm_->init(rng);
    h1_.init(rng);
    h2_.init(rng);
    out_.init(rng);
}

std::vector<std::vector<double>> VfnNet::state_estimate(
    const AgentTopology& topo, const std::vector<std::vector<double>>& o_hat,
    Cache& cache) const {
    if (!se_comm_) throw std::logic_error("variant has no state-estimation branch");
    return se_comm_->forward(topo, o_hat, cache.se);
}

std::vector<std::vector<double>> VfnNet::mean_field_estimate(
    const AgentTopology& topo, const std::vector<std::vector<double>>& q_hat,
    Cache& cache) const {
    if (!me_comm_) throw std::logic_error("variant has no mean-field branch");
    auto q_tilde = me_comm_->forward(topo, q_hat, cache.me);
    for (std::size_t i = 0; i < topo.num_agents(); ++i) {
        const auto& nbrs = topo.neighbors[i];
        if (nbrs.empty()) continue;  // isolated agent: mean term is zero
        const double inv = 1.0 / static_cast<double>(nbrs.size());
        for (int j : nbrs) {
            for (std::size_t a = 0; a < cfg_.act_size; ++a) q_tilde[i][a] += inv * q_hat[j][a];
        }
    }
    return q_tilde;
}

std::vector<std::vector<double>> VfnNet::q_values(
    const AgentTopology& topo, const std::vector<std::vector<double>>& obs,
    const std::vector<std::vector<double>>& s_tilde,
    const std::vector<std::vector<double>>& q_tilde,
    const std::vector<std::vector<double>>& aux, Cache& cache) const {
    const std::size_t N = topo.num_agents();
    const std::size_t in_size = dqn_input_size(cfg_);
    cache.h1.assign(N, {});
    cache.h2.assign(N, {});
    cache.out.assign(N, {});
    cache.input.assign(N, {});
    std::vector<std::vector<double>> q(N);
    for (std::size_t i = 0; i < N; ++i) {
        auto& x = cache.input[i];
        x.reserve(in_size);
        x.assign(obs[i].begin(), obs[i].end());
        switch (cfg_.variant) {
            case AgentVariant::kFull:
                x.insert(x.end(), s_tilde[i].begin(), s_tilde[i].end());
                x.insert(x.end(), q_tilde[i].begin(), q_tilde[i].end());
                break;
            case AgentVariant::kDccpOnly:
                x.insert(x.end(), s_tilde[i].begin(), s_tilde[i].end());
                break;
            case AgentVariant::kIql:
                break;
            case AgentVariant::kMfq:
                if (aux.size() != N) throw std::invalid_argument("mfq variant needs aux mean-action input");
                x.insert(x.end(), aux[i].begin(), aux[i].end());
                break;
        }
        if (x.size() != in_size) throw std::invalid_argument("vfn: assembled input size mismatch");
        const auto a1 = h1_.forward(x, cache.h1[i]);
        const auto a2 = h2_.forward(a1, cache.h2[i]);
        q[i] = out_.forward(a2, cache.out[i]);
    }
    cache.valid = true;
    return q;
}

std::vector<std::vector<double>> VfnNet::forward(
    const AgentTopology& topo, const std::vector<std::vector<double>>& obs,
    const std::vector<std::vector<double>>& o_hat,
    const std::vector<std::vector<double>>& q_hat,
    const std::vector<std::vector<double>>& aux, Cache& cache) const {
    std::vector<std::vector<double>> s_tilde, q_tilde;
    if (se_comm_) s_tilde = state_estimate(topo, o_hat, cache);
    if (me_comm_) q_tilde = mean_field_estimate(topo, q_hat, cache);
    return q_values(topo, obs, s_tilde, q_tilde, aux, cache);
}

void VfnNet::backward(const AgentTopology& topo, const Cache& cache,
                      const std::vector<std::vector<double>>& dq) {
    if (!cache.valid) throw std::logic_error("vfn: backward called without a forward cache");
    const std::size_t N = topo.num_agents();
    std::vector<std::vector<double>> ds_tilde, dq_tilde;
    if (se_comm_) ds_tilde.assign(N, std::vector<double>(cfg_.obs_size, 0.0));
    if (me_comm_) dq_tilde.assign(N, std::vector<double>(cfg_.act_size, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        const auto da2 = out_.backward(cache.out[i], dq[i]);
        const auto da1 = h2_.backward(cache.h2[i], da2);
        const auto dx = h1_.backward(cache.h1[i], da1);
        // obs cotangent discarded; split the rest per variant layout
        std::size_t off = cfg_.obs_size;
        if (se_comm_) {
            for (std::size_t j = 0; j < cfg_.obs_size; ++j) ds_tilde[i][j] = dx[off + j];
            off += cfg_.obs_size;
        }
        if (me_comm_) {
            for (std::size_t j = 0; j < cfg_.act_size; ++j) dq_tilde[i][j] = dx[off + j];
        }
    }
    // q_hat/o_hat are detached: cotangents returned by the DCCPs (and the
    // neighbor-mean term) are dropped here.
    if (se_comm_) se_comm_->backward(topo, cache.se, ds_tilde);
    if (me_comm_) me_comm_->backward(topo, cache.me, dq_tilde);
}

void VfnNet::copy_values_from(VfnNet& other) {
    auto dst = params();
    auto src = other.params();
    if (dst.size() != src.size()) throw std::logic_error("vfn copy: structure mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (dst[i]->size() != src[i]->size()) throw std::logic_error("vfn copy: shape mismatch");
        dst[i]->values = src[i]->values;
    }
}

ParamRefs VfnNet::params() {
    ParamRefs refs;
    if (se_comm_) for (auto* p : se_comm_->params()) refs.push_back(p);
    if (me_comm_) for (auto* p : me_comm_->params()) refs.push_back(p);
    for (auto* p : h1_.params()) refs.push_back(p);
    for (auto* p : h2_.params()) refs.push_back(p);
    for (auto* p : out_.params()) refs.push_back(p);
    return refs;
}

std::size_t VfnNet::param_count() {
    return total_params(params());
}

int greedy_action(std::span<const double> q, const std::vector<bool>* mask) {
    int best = -1;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        if (best < 0 || q[i] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    if (best < 0) throw std::invalid_argument("greedy_action: all actions masked");
    return best;
}

}  // namespace marlcom
