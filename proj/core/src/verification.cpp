#include "marlcom/verification.hpp"

#include <cmath>

#include "marlcom/grad_check.hpp"
#include "marlcom/mean_field.hpp"
#include "marlcom/predictors.hpp"
#include "marlcom/vfn.hpp"

namespace marlcom {

bool CheckSuite::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::vector<std::vector<double>> dccp_reference_forward(
    const Dccp& dccp, const AgentTopology& topo,
    const std::vector<std::vector<double>>& inputs) {
    const auto& cfg = dccp.config();
    const std::size_t M = cfg.channels, K = cfg.kernels, n = cfg.kernel_size;
    const int half = static_cast<int>(n) / 2;
    std::vector<std::vector<double>> z(topo.num_agents(), std::vector<double>(M, 0.0));
    for (std::size_t i = 0; i < topo.num_agents(); ++i) {
        auto [r, c] = topo.positions[i];
        for (std::size_t m = 0; m < M; ++m) {
            for (std::size_t k = 0; k < K; ++k) {
                double u = 0.0;
                for (int dr = -half; dr <= half; ++dr) {
                    for (int dc = -half; dc <= half; ++dc) {
                        const int j = topo.agent_at(r + dr, c + dc);
                        if (j < 0) continue;  // zero padding
                        u += dccp.kernels.values[((m * K + k) * n + (dr + half)) * n + (dc + half)] *
                             inputs[static_cast<std::size_t>(j)][m];
                    }
                }
                z[i][m] += u * dccp.agent_weights.values[(i * M + m) * K + k];
            }
        }
    }
    return z;
}

namespace {

constexpr double kGradTol = 1e-4;
constexpr double kFdStep = 1e-5;

double sse(std::span<const double> y, std::span<const double> t) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - t[i]) * (y[i] - t[i]);
    return s;
}

std::vector<std::vector<double>> random_vectors(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (auto& v : out)
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return out;
}

CheckResult dense_layer_check(Activation act, const char* name) {
    Rng rng(act == Activation::kRelu ? 101 : 102);
    DenseLayer layer("dense", 4, 3, act);
    ParameterBlock x("x", {4});
    std::vector<double> target(3);
    // redraw until every pre-activation is well away from the relu kink
    // and at least one unit is active, so finite differences are clean
    for (int attempt = 0; attempt < 100; ++attempt) {
        layer.init(rng);
        for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
        for (double& v : target) v = rng.uniform(-1.0, 1.0);
        DenseCache c;
        layer.forward(x.values, c);
        bool clean = false;
        for (double p : c.pre) {
            if (std::fabs(p) < 1e-3) { clean = false; break; }
            if (p > 0.0) clean = true;
        }
        if (clean) break;
    }

    const auto loss_fn = [&] {
        DenseCache c;
        return sse(layer.forward(x.values, c), target);
    };
    const auto grad_fn = [&] {
        DenseCache c;
        const auto y = layer.forward(x.values, c);
        std::vector<double> dy(3);
        for (std::size_t i = 0; i < 3; ++i) dy[i] = 2.0 * (y[i] - target[i]);
        const auto dx = layer.backward(c, dy);
        for (std::size_t i = 0; i < 4; ++i) x.grads[i] += dx[i];
        return sse(y, target);
    };
    ParamRefs params = {&layer.weight, &layer.bias, &x};
    const auto report = grad_check(loss_fn, grad_fn, params, kFdStep);
    return {name, report.max_rel_err < kGradTol, report.max_rel_err, kGradTol};
}

CheckResult dccp_forward_check() {
    Rng rng(103);
    const auto topo = AgentTopology::full_grid(3, 3);
    const DccpConfig cfg{2, 3, 3};
    Dccp dccp("dccp", cfg, topo.num_agents());
    dccp.init(rng);
    for (double& w : dccp.agent_weights.values) w = rng.uniform(-1.0, 1.0);

    ParameterBlock x("inputs", {topo.num_agents(), cfg.channels});
    for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
    const auto targets = random_vectors(rng, topo.num_agents(), cfg.channels);

    const auto unpack = [&] {
        std::vector<std::vector<double>> in(topo.num_agents(), std::vector<double>(cfg.channels));
        for (std::size_t i = 0; i < topo.num_agents(); ++i)
            for (std::size_t m = 0; m < cfg.channels; ++m) in[i][m] = x.values[i * cfg.channels + m];
        return in;
    };
    const auto loss_fn = [&] {
        DccpCache c;
        const auto z = dccp.forward(topo, unpack(), c);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += sse(z[i], targets[i]);
        return s;
    };
    const auto grad_fn = [&] {
        DccpCache c;
        const auto z = dccp.forward(topo, unpack(), c);
        std::vector<std::vector<double>> dz(z.size(), std::vector<double>(cfg.channels));
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            s += sse(z[i], targets[i]);
            for (std::size_t m = 0; m < cfg.channels; ++m) dz[i][m] = 2.0 * (z[i][m] - targets[i][m]);
        }
        const auto dx = dccp.backward(topo, c, dz);
        for (std::size_t i = 0; i < dx.size(); ++i)
            for (std::size_t m = 0; m < cfg.channels; ++m) x.grads[i * cfg.channels + m] += dx[i][m];
        return s;
    };
    ParamRefs params = {&dccp.kernels, &dccp.agent_weights, &x};
    const auto report = grad_check(loss_fn, grad_fn, params, kFdStep);
    return {"dccp_forward", report.max_rel_err < kGradTol, report.max_rel_err, kGradTol};
}

CheckResult predictor_loss_check(bool prn) {
    Rng rng(prn ? 104 : 105);
    const auto topo = AgentTopology::full_grid(2, 2);
    const std::size_t obs = 3, act = 2;
    const std::size_t latent = prn ? act : obs;
    PredictorNet net(prn ? "prn" : "opn", obs, act, latent, topo.num_agents(),
                     DccpConfig{0, 2, 3}, 5);
    net.init(rng);
    const auto prev_obs = random_vectors(rng, topo.num_agents(), obs);
    const auto prev_q = random_vectors(rng, topo.num_agents(), act);
    const auto targets = random_vectors(rng, topo.num_agents(), latent);

    const auto loss_fn = [&] {
        PredictorNet::Cache c;
        return prediction_loss(net.forward(topo, prev_obs, prev_q, c), targets);
    };
    const auto grad_fn = [&] {
        PredictorNet::Cache c;
        const auto pred = net.forward(topo, prev_obs, prev_q, c);
        net.backward(topo, c, prediction_loss_grad(pred, targets));
        return prediction_loss(pred, targets);
    };
    const auto report = grad_check(loss_fn, grad_fn, net.params(), kFdStep);
    return {prn ? "prn_loss" : "opn_loss", report.max_rel_err < kGradTol, report.max_rel_err,
            kGradTol};
}

CheckResult vfn_bellman_check() {
    Rng rng(106);
    const auto topo = AgentTopology::full_grid(3, 3);
    const std::size_t obs = 3, act = 2;
    VfnConfig cfg{obs, act, 8, DccpConfig{0, 2, 3}, AgentVariant::kFull};
    VfnNet net("vfn", cfg, topo.num_agents());
    net.init(rng);
    // detached predictor outputs and frozen Bellman targets
    const auto o = random_vectors(rng, topo.num_agents(), obs);
    const auto o_hat = random_vectors(rng, topo.num_agents(), obs);
    const auto q_hat = random_vectors(rng, topo.num_agents(), act);
    std::vector<std::size_t> actions(topo.num_agents());
    std::vector<double> y(topo.num_agents());
    for (std::size_t i = 0; i < topo.num_agents(); ++i) {
        actions[i] = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(act)));
        y[i] = rng.uniform(-1.0, 1.0);
    }

    const auto loss_fn = [&] {
        VfnNet::Cache c;
        const auto q = net.forward(topo, o, o_hat, q_hat, {}, c);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = y[i] - q[i][actions[i]];
            s += d * d;
        }
        return s;
    };
    const auto grad_fn = [&] {
        VfnNet::Cache c;
        const auto q = net.forward(topo, o, o_hat, q_hat, {}, c);
        std::vector<std::vector<double>> dq(q.size(), std::vector<double>(act, 0.0));
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = y[i] - q[i][actions[i]];
            s += d * d;
            dq[i][actions[i]] = -2.0 * d;
        }
        net.backward(topo, c, dq);
        return s;
    };
    const auto report = grad_check(loss_fn, grad_fn, net.params(), kFdStep);
    return {"vfn_bellman", report.max_rel_err < kGradTol, report.max_rel_err, kGradTol};
}

}  // namespace

CheckSuite gradient_suite() {
    CheckSuite suite{"gradient_suite", {}};
    suite.checks.push_back(dense_layer_check(Activation::kRelu, "dense_relu"));
    suite.checks.push_back(dense_layer_check(Activation::kIdentity, "dense_identity"));
    suite.checks.push_back(dccp_forward_check());
    suite.checks.push_back(predictor_loss_check(true));
    suite.checks.push_back(predictor_loss_check(false));
    suite.checks.push_back(vfn_bellman_check());
    return suite;
}

CheckSuite convolution_oracle_suite(std::size_t cases) {
    Rng rng(2024);
    double max_diff = 0.0;
    for (std::size_t t = 0; t < cases; ++t) {
        const int h = 1 + rng.uniform_int(4);
        const int w = 1 + rng.uniform_int(4);
        std::vector<std::pair<int, int>> positions;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                if (rng.uniform(0.0, 1.0) < 0.8) positions.emplace_back(r, c);
        if (positions.empty()) positions.emplace_back(0, 0);
        const DccpConfig cfg{1 + static_cast<std::size_t>(rng.uniform_int(5)),
                             1 + static_cast<std::size_t>(rng.uniform_int(4)),
                             rng.bernoulli(0.5) ? 3u : 1u};
        const auto topo = AgentTopology::from_positions(h, w, positions,
                                                        static_cast<int>(cfg.kernel_size));
        Dccp dccp("probe", cfg, topo.num_agents());
        for (double& k : dccp.kernels.values) k = rng.uniform(-1.0, 1.0);
        for (double& v : dccp.agent_weights.values) v = rng.uniform(-1.0, 1.0);
        std::vector<std::vector<double>> inputs(topo.num_agents(),
                                                std::vector<double>(cfg.channels));
        for (auto& x : inputs)
            for (double& v : x) v = rng.uniform(-1.0, 1.0);

        DccpCache cache;
        const auto z = dccp.forward(topo, inputs, cache);
        const auto ref = dccp_reference_forward(dccp, topo, inputs);
        for (std::size_t i = 0; i < z.size(); ++i)
            for (std::size_t m = 0; m < cfg.channels; ++m)
                max_diff = std::max(max_diff, std::fabs(z[i][m] - ref[i][m]));
    }
    CheckSuite suite{"convolution_oracle", {}};
    suite.checks.push_back({"dccp_vs_reference", max_diff <= 1e-12, max_diff, 1e-12});
    return suite;
}

CheckSuite mean_field_oracle_suite(std::size_t remainder_trials) {
    CheckSuite suite{"mean_field_oracle", {}};
    Rng rng(777);

    // mean_action vs brute-force elementwise averaging
    double max_diff = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform_int(5));
        const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform_int(10));
        std::vector<std::vector<double>> onehots(count, std::vector<double>(dim, 0.0));
        for (auto& a : onehots) a[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(dim)))] = 1.0;
        const auto mean = mean_action(onehots, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0.0;
            for (const auto& a : onehots) s += a[j];
            max_diff = std::max(max_diff, std::fabs(mean.probs[j] - s / static_cast<double>(count)));
        }
    }
    suite.checks.push_back({"mean_action_brute_force", max_diff <= 1e-15, max_diff, 1e-15});

    // zero compensation -> pure neighbor mean
    {
        const auto topo = AgentTopology::full_grid(3, 3);
        VfnConfig cfg{2, 3, 4, DccpConfig{0, 2, 3}, AgentVariant::kFull};
        VfnNet net("probe", cfg, topo.num_agents());
        Rng init_rng(5);
        net.init(init_rng);
        auto params = net.params();
        for (auto* p : params) {
            if (p->name.find(".me.agent_weights") != std::string::npos) p->fill(0.0);
        }
        std::vector<std::vector<double>> q_hat(topo.num_agents(), std::vector<double>(3));
        for (auto& q : q_hat)
            for (double& v : q) v = rng.uniform(-1.0, 1.0);
        VfnNet::Cache cache;
        const auto q_tilde = net.mean_field_estimate(topo, q_hat, cache);
        double diff = 0.0;
        for (std::size_t i = 0; i < topo.num_agents(); ++i) {
            const auto& nbrs = topo.neighbors[i];
            for (std::size_t a = 0; a < 3; ++a) {
                double s = 0.0;
                for (int j : nbrs) s += q_hat[static_cast<std::size_t>(j)][a];
                const double expected = nbrs.empty() ? 0.0 : s / static_cast<double>(nbrs.size());
                diff = std::max(diff, std::fabs(q_tilde[i][a] - expected));
            }
        }
        suite.checks.push_back({"zero_compensation_mean", diff <= 1e-12, diff, 1e-12});
    }

    // Taylor remainder bound on a quadratic probe
    {
        const double smoothness = 1.7;
        const auto probe = QuadraticProbe::random(rng, 4, smoothness);
        const auto stats = remainder_bound_check(probe, rng, remainder_trials);
        suite.checks.push_back({"remainder_bound", !stats.bound_violated,
                                stats.max_abs_remainder, 2.0 * smoothness});
        suite.checks.push_back({"first_order_vanishes", stats.max_first_order <= 1e-12,
                                stats.max_first_order, 1e-12});
        suite.checks.push_back({"taylor_identity", stats.max_taylor_gap <= 1e-10,
                                stats.max_taylor_gap, 1e-10});
    }
    {
        const auto probe = QuadraticProbe::linear(rng, 4);
        const auto stats = remainder_bound_check(probe, rng, 100);
        suite.checks.push_back({"linear_probe_zero_remainder", stats.max_abs_remainder == 0.0,
                                stats.max_abs_remainder, 0.0});
    }
    return suite;
}

}  // namespace marlcom
