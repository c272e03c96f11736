#include "marlcom/trainer.hpp"

#include <iostream>
#include <stdexcept>

#include "marlcom/mean_field.hpp"

namespace marlcom {

HyperParams HyperParams::from_json(const nlohmann::json& j) {
    HyperParams hp;
    hp.eps_start = j.value("eps_start", hp.eps_start);
    hp.eps_end = j.value("eps_end", hp.eps_end);
    hp.eps_decay_fraction = j.value("eps_decay_fraction", hp.eps_decay_fraction);
    hp.alpha = j.value("alpha", hp.alpha);
    hp.gamma = j.value("gamma", hp.gamma);
    hp.lambda1 = j.value("lambda1", hp.lambda1);
    hp.lambda2 = j.value("lambda2", hp.lambda2);
    hp.target_period = j.value("target_period", hp.target_period);
    hp.grad_clip = j.value("grad_clip", hp.grad_clip);
    hp.batch = j.value("batch", hp.batch);
    hp.capacity = j.value("capacity", hp.capacity);
    hp.adaptive_optimizer = j.value("adaptive_optimizer", hp.adaptive_optimizer);
    hp.validate();
    return hp;
}

nlohmann::json HyperParams::to_json() const {
    return {{"eps_start", eps_start},
            {"eps_end", eps_end},
            {"eps_decay_fraction", eps_decay_fraction},
            {"alpha", alpha},
            {"gamma", gamma},
            {"lambda1", lambda1},
            {"lambda2", lambda2},
            {"target_period", target_period},
            {"grad_clip", grad_clip},
            {"batch", batch},
            {"capacity", capacity},
            {"adaptive_optimizer", adaptive_optimizer}};
}

void HyperParams::validate() const {
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must be in [0,1)");
    if (lambda1 < 0.0 || lambda2 < 0.0) throw std::invalid_argument("lambdas must be >= 0");
    if (target_period < 1) throw std::invalid_argument("target_period must be >= 1");
    if (grad_clip < 0.0) throw std::invalid_argument("grad_clip must be >= 0");
    if (batch < 1 || capacity < 1) throw std::invalid_argument("batch/capacity must be positive");
    if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0) {
        throw std::invalid_argument("epsilon out of [0,1]");
    }
}

NetConfig NetConfig::from_json(const nlohmann::json& j) {
    NetConfig n;
    n.enc_hidden = j.value("enc_hidden", n.enc_hidden);
    n.dqn_hidden = j.value("dqn_hidden", n.dqn_hidden);
    n.comm_kernels = j.value("comm_kernels", n.comm_kernels);
    n.comm_kernel_size = j.value("comm_kernel_size", n.comm_kernel_size);
    return n;
}

nlohmann::json NetConfig::to_json() const {
    return {{"enc_hidden", enc_hidden},
            {"dqn_hidden", dqn_hidden},
            {"comm_kernels", comm_kernels},
            {"comm_kernel_size", comm_kernel_size}};
}

double bellman_target(double r, std::span<const double> q_next_target, bool terminal,
                      double gamma) {
    if (terminal) return r;
    double best = q_next_target[0];
    for (double v : q_next_target) best = std::max(best, v);
    return r + gamma * best;
}

Trainer::Trainer(nlohmann::json env_spec, AgentVariant variant, NetConfig net_cfg,
                 HyperParams hp, std::uint64_t seed)
    : env_spec_(std::move(env_spec)),
      variant_(variant),
      net_cfg_(net_cfg),
      hp_(hp),
      env_(make_env(env_spec_)),
      rng_(seed),
      buffer_(hp.capacity) {
    hp_.validate();
    const std::size_t N = env_->topology().num_agents();
    const std::size_t obs = env_->obs_size();
    const std::size_t act = env_->action_size();
    const DccpConfig comm{0, net_cfg.comm_kernels, net_cfg.comm_kernel_size};

    if (uses_prn()) {
        prn_ = std::make_unique<PredictorNet>("prn", obs, act, act, N, comm, net_cfg.enc_hidden);
        prn_->init(rng_);
    }
    if (uses_opn()) {
        opn_ = std::make_unique<PredictorNet>("opn", obs, act, obs, N, comm, net_cfg.enc_hidden);
        opn_->init(rng_);
    }
    VfnConfig vcfg{obs, act, net_cfg.dqn_hidden, comm, variant};
    vfn_ = std::make_unique<VfnNet>("vfn", vcfg, N);
    vfn_->init(rng_);
    target_ = std::make_unique<VfnNet>("vfn_target", vcfg, N);
    target_->copy_values_from(*vfn_);

    OptimizerConfig ocfg{hp_.alpha, hp_.adaptive_optimizer};
    opt_theta_ = std::make_unique<Optimizer>(ocfg, vfn_->params());
    if (prn_) opt_phi_ = std::make_unique<Optimizer>(ocfg, prn_->params());
    if (opn_) opt_varphi_ = std::make_unique<Optimizer>(ocfg, opn_->params());

    begin_episode();
}

void Trainer::begin_episode() {
    const std::uint64_t episode_seed = rng_.raw()();
    cur_obs_ = env_->reset(episode_seed);
    const std::size_t N = env_->topology().num_agents();
    prev_obs_.assign(N, std::vector<double>(env_->obs_size(), 0.0));
    prev_q_.assign(N, std::vector<double>(env_->action_size(), 0.0));
    prev_actions_.reset();
    episode_t_ = 0;
}

std::vector<std::vector<double>> Trainer::mean_prev_actions(
    const std::vector<int>* prev_actions) const {
    const auto& topo = env_->topology();
    const std::size_t N = topo.num_agents();
    const std::size_t A = env_->action_size();
    std::vector<std::vector<double>> aux(N, std::vector<double>(A, 0.0));
    if (!prev_actions) return aux;  // t=0: zero vector
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::vector<double>> onehots;
        onehots.reserve(topo.neighbors[i].size());
        for (int j : topo.neighbors[i]) {
            std::vector<double> oh(A, 0.0);
            oh[static_cast<std::size_t>((*prev_actions)[j])] = 1.0;
            onehots.push_back(std::move(oh));
        }
        aux[i] = mean_action(onehots, A).probs;
    }
    return aux;
}

std::vector<std::vector<double>> Trainer::compute_q(
    const std::vector<std::vector<double>>& obs,
    const std::vector<std::vector<double>>& prev_obs,
    const std::vector<std::vector<double>>& prev_q,
    const std::vector<std::vector<double>>& aux,
    std::vector<std::vector<double>>* q_hat_out,
    std::vector<std::vector<double>>* o_hat_out) {
    const auto& topo = env_->topology();
    std::vector<std::vector<double>> q_hat, o_hat;
    if (uses_prn()) {
        PredictorNet::Cache cache;
        q_hat = prn_->forward(topo, prev_obs, prev_q, cache);
    }
    if (uses_opn()) {
        PredictorNet::Cache cache;
        o_hat = opn_->forward(topo, prev_obs, prev_q, cache);
    }
    if (q_hat_out) *q_hat_out = q_hat;
    if (o_hat_out) *o_hat_out = o_hat;
    VfnNet::Cache cache;
    return vfn_->forward(topo, obs, o_hat, q_hat, aux, cache);
}

void Trainer::rollout_step(double eps) {
    const std::size_t N = env_->topology().num_agents();
    const std::size_t A = env_->action_size();

    std::vector<std::vector<double>> aux;
    if (uses_aux()) aux = mean_prev_actions(prev_actions_ ? &*prev_actions_ : nullptr);
    const auto q = compute_q(cur_obs_, prev_obs_, prev_q_, aux);

    std::vector<int> actions(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (rng_.uniform(0.0, 1.0) < eps) {
            actions[i] = rng_.uniform_int(static_cast<int>(A));
        } else {
            actions[i] = greedy_action(q[i]);
        }
    }

    StepResult result = env_->step(actions);

    JointTransition tr;
    tr.t = episode_t_;
    tr.prev_obs = prev_obs_;
    tr.prev_q = prev_q_;
    tr.obs = cur_obs_;
    tr.actions = actions;
    tr.rewards = result.rewards;
    tr.q = q;
    tr.next_obs = result.obs;
    if (uses_aux()) {
        tr.aux = aux;
        tr.next_aux = mean_prev_actions(&actions);
    }
    tr.terminal = result.done && env_->timeout_is_terminal();
    buffer_.push(std::move(tr));

    prev_obs_ = cur_obs_;
    prev_q_ = q;
    prev_actions_ = actions;
    cur_obs_ = result.obs;
    ++episode_t_;
    if (result.done) begin_episode();
}

LossReport Trainer::train_step() {
    LossReport report;
    if (buffer_.size() < hp_.batch) {
        if (!warned_small_buffer_) {
            std::cerr << "trainer: buffer below batch size, skipping updates until filled\n";
            warned_small_buffer_ = true;
        }
        report.skipped = true;
        return report;
    }
    const auto& topo = env_->topology();
    const std::size_t A = env_->action_size();
    const auto batch = buffer_.sample(rng_, hp_.batch);
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    for (const JointTransition* tr : batch) {
        // behavior-side reconstruction from stored carries
        PredictorNet::Cache prn_cache, opn_cache;
        std::vector<std::vector<double>> q_hat, o_hat;
        if (uses_prn()) q_hat = prn_->forward(topo, tr->prev_obs, tr->prev_q, prn_cache);
        if (uses_opn()) o_hat = opn_->forward(topo, tr->prev_obs, tr->prev_q, opn_cache);
        VfnNet::Cache vcache;
        const auto q_pred = vfn_->forward(topo, tr->obs, o_hat, q_hat, tr->aux, vcache);

        // next-step predictions feed the frozen target network
        std::vector<std::vector<double>> q_hat_next, o_hat_next;
        if (uses_prn()) {
            PredictorNet::Cache c;
            q_hat_next = prn_->forward(topo, tr->obs, tr->q, c);
        }
        if (uses_opn()) {
            PredictorNet::Cache c;
            o_hat_next = opn_->forward(topo, tr->obs, tr->q, c);
        }
        VfnNet::Cache tcache;
        const auto q_next = target_->forward(topo, tr->next_obs, o_hat_next, q_hat_next,
                                             tr->next_aux, tcache);

        std::vector<std::vector<double>> dq(topo.num_agents(), std::vector<double>(A, 0.0));
        for (std::size_t i = 0; i < topo.num_agents(); ++i) {
            const double y = bellman_target(tr->rewards[i], q_next[i], tr->terminal, hp_.gamma);
            const auto a = static_cast<std::size_t>(tr->actions[i]);
            const double diff = q_pred[i][a] - y;
            report.vfn += diff * diff;
            dq[i][a] = 2.0 * diff * inv_b;
        }
        vfn_->backward(topo, vcache, dq);

        if (uses_prn()) {
            report.prn += prediction_loss(q_hat, tr->q);
            prn_->backward(topo, prn_cache,
                           prediction_loss_grad(q_hat, tr->q, hp_.lambda1 * inv_b));
        }
        if (uses_opn()) {
            report.opn += prediction_loss(o_hat, tr->obs);
            opn_->backward(topo, opn_cache,
                           prediction_loss_grad(o_hat, tr->obs, hp_.lambda2 * inv_b));
        }
    }

    clip_grad_norm(vfn_->params(), hp_.grad_clip);
    opt_theta_->step();
    if (opt_phi_) {
        clip_grad_norm(prn_->params(), hp_.grad_clip);
        opt_phi_->step();
    }
    if (opt_varphi_) {
        clip_grad_norm(opn_->params(), hp_.grad_clip);
        opt_varphi_->step();
    }

    report.vfn *= inv_b;
    report.prn *= inv_b;
    report.opn *= inv_b;
    report.total = report.vfn + hp_.lambda1 * report.prn + hp_.lambda2 * report.opn;
    return report;
}

void Trainer::maybe_sync_target() {
    if (global_step_ % hp_.target_period == 0) target_->copy_values_from(*vfn_);
}

LossReport Trainer::step(long total_steps) {
    rollout_step(epsilon_at(global_step_, total_steps));
    LossReport report = train_step();
    ++global_step_;
    maybe_sync_target();
    return report;
}

double Trainer::epsilon_at(long step, long total_steps) const {
    const double decay_steps =
        std::max(1.0, hp_.eps_decay_fraction * static_cast<double>(total_steps));
    const double frac = std::min(1.0, static_cast<double>(step) / decay_steps);
    return hp_.eps_start + (hp_.eps_end - hp_.eps_start) * frac;
}

EvalMetrics Trainer::evaluate(int episodes, std::uint64_t eval_seed_base) {
    EvalMetrics metrics;
    const std::size_t N = env_->topology().num_agents();
    double reward_sum = 0.0, reward_late_sum = 0.0;
    long steps = 0, late_steps = 0;
    std::map<std::string, double> metric_sums;
    long metric_steps = 0;

    for (int ep = 0; ep < episodes; ++ep) {
        auto eval_env = make_env(env_spec_);
        auto obs = eval_env->reset(eval_seed_base + static_cast<std::uint64_t>(ep));
        std::vector<std::vector<double>> prev_obs(N, std::vector<double>(env_->obs_size(), 0.0));
        std::vector<std::vector<double>> prev_q(N, std::vector<double>(env_->action_size(), 0.0));
        std::optional<std::vector<int>> prev_actions;
        int t = 0;
        while (true) {
            std::vector<std::vector<double>> aux;
            if (uses_aux()) aux = mean_prev_actions(prev_actions ? &*prev_actions : nullptr);
            const auto q = compute_q(obs, prev_obs, prev_q, aux);
            std::vector<int> actions(N);
            for (std::size_t i = 0; i < N; ++i) actions[i] = greedy_action(q[i]);
            StepResult result = eval_env->step(actions);

            double step_reward = 0.0;
            for (double r : result.rewards) step_reward += r;
            step_reward /= static_cast<double>(N);
            reward_sum += step_reward;
            ++steps;
            if (t >= 1) {  // steps 2.. in 1-based counting
                reward_late_sum += step_reward;
                ++late_steps;
            }
            for (const auto& [k, v] : eval_env->step_metrics()) metric_sums[k] += v;
            ++metric_steps;

            prev_obs = obs;
            prev_q = q;
            prev_actions = actions;
            obs = result.obs;
            ++t;
            if (result.done) break;
        }
    }
    metrics.values["mean_reward"] = reward_sum / static_cast<double>(steps);
    if (late_steps > 0) {
        metrics.values["mean_reward_late"] = reward_late_sum / static_cast<double>(late_steps);
    }
    for (const auto& [k, v] : metric_sums) {
        metrics.values[k] = v / static_cast<double>(metric_steps);
    }
    return metrics;
}

ParamRefs Trainer::checkpoint_params() {
    ParamRefs refs = vfn_->params();
    if (prn_) for (auto* p : prn_->params()) refs.push_back(p);
    if (opn_) for (auto* p : opn_->params()) refs.push_back(p);
    return refs;
}

}  // namespace marlcom
