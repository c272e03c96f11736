#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "marlcom/env.hpp"
#include "marlcom/optimizer.hpp"
#include "marlcom/predictors.hpp"
#include "marlcom/replay.hpp"
#include "marlcom/vfn.hpp"

namespace marlcom {

struct HyperParams {
    double eps_start = 1.0;
    double eps_end = 0.05;
    double eps_decay_fraction = 0.2;  // of total training steps
    double alpha = 1e-3;
    double gamma = 0.99;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    long target_period = 200;  // eta
    double grad_clip = 10.0;   // global L2 norm per update; 0 disables
    std::size_t batch = 32;
    std::size_t capacity = 1000;
    bool adaptive_optimizer = true;

    static HyperParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct NetConfig {
    std::size_t enc_hidden = 32;
    std::size_t dqn_hidden = 64;
    std::size_t comm_kernels = 4;      // K
    std::size_t comm_kernel_size = 3;  // n

    static NetConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct LossReport {
    double vfn = 0.0;
    double prn = 0.0;
    double opn = 0.0;
    double total = 0.0;
    bool skipped = false;
};

struct EvalMetrics {
    std::map<std::string, double> values;
};

// y = r if terminal else r + gamma * max(q_next)
double bellman_target(double r, std::span<const double> q_next_target, bool terminal,
                      double gamma);

// One training run: owns the nets, target network, replay buffer,
// optimizers, and RNG. Single-threaded; run several instances for seeds.
class Trainer {
public:
    Trainer(nlohmann::json env_spec, AgentVariant variant, NetConfig net_cfg,
            HyperParams hp, std::uint64_t seed);

    // epsilon-greedy behavior step; stores one JointTransition and
    // advances the episode (resetting the env when it finishes).
    void rollout_step(double eps);

    // Samples a minibatch, rebuilds predictions and Bellman targets, and
    // applies the three disjoint gradient updates. No-op below batch size.
    LossReport train_step();

    // Copies online parameters into the target every target_period steps.
    void maybe_sync_target();

    // rollout + train + target sync, advancing the global step counter
    LossReport step(long total_steps);

    double epsilon_at(long step, long total_steps) const;

    // Greedy evaluation on fresh env instances; episode seeds derive from
    // eval_seed_base + episode index only, so results are reproducible
    // from a checkpoint.
    EvalMetrics evaluate(int episodes, std::uint64_t eval_seed_base);

    // behavior-time forward pass: fills q per agent (and optionally the
    // predictions used); shared by rollout and evaluation
    std::vector<std::vector<double>> compute_q(
        const std::vector<std::vector<double>>& obs,
        const std::vector<std::vector<double>>& prev_obs,
        const std::vector<std::vector<double>>& prev_q,
        const std::vector<std::vector<double>>& aux,
        std::vector<std::vector<double>>* q_hat_out = nullptr,
        std::vector<std::vector<double>>* o_hat_out = nullptr);

    ParamRefs checkpoint_params();

    AgentVariant variant() const { return variant_; }
    bool uses_prn() const { return variant_ == AgentVariant::kFull; }
    bool uses_opn() const {
        return variant_ == AgentVariant::kFull || variant_ == AgentVariant::kDccpOnly;
    }
    bool uses_aux() const { return variant_ == AgentVariant::kMfq; }

    Env& env() { return *env_; }
    VfnNet& vfn() { return *vfn_; }
    VfnNet& target_vfn() { return *target_; }
    PredictorNet* prn() { return prn_.get(); }
    PredictorNet* opn() { return opn_.get(); }
    ReplayBuffer& buffer() { return buffer_; }
    Rng& rng() { return rng_; }
    long global_step() const { return global_step_; }
    const HyperParams& hyper() const { return hp_; }

private:
    void begin_episode();
    std::vector<std::vector<double>> mean_prev_actions(
        const std::vector<int>* prev_actions) const;

    nlohmann::json env_spec_;
    AgentVariant variant_;
    NetConfig net_cfg_;
    HyperParams hp_;
    std::unique_ptr<Env> env_;
    Rng rng_;

    std::unique_ptr<PredictorNet> prn_;
    std::unique_ptr<PredictorNet> opn_;
    std::unique_ptr<VfnNet> vfn_;
    std::unique_ptr<VfnNet> target_;

    std::unique_ptr<Optimizer> opt_theta_;
    std::unique_ptr<Optimizer> opt_phi_;
    std::unique_ptr<Optimizer> opt_varphi_;

    ReplayBuffer buffer_;
    long global_step_ = 0;

    // episode carry
    std::vector<std::vector<double>> cur_obs_;
    std::vector<std::vector<double>> prev_obs_;
    std::vector<std::vector<double>> prev_q_;
    std::optional<std::vector<int>> prev_actions_;
    int episode_t_ = 0;
    bool warned_small_buffer_ = false;
};

}  // namespace marlcom
