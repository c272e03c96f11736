#include "marlcom/dccp.hpp"

#include <cmath>
#include <stdexcept>

namespace marlcom {

Dccp::Dccp(std::string name, DccpConfig cfg, std::size_t num_agents)
    : kernels(name + ".kernels",
              {cfg.channels, cfg.kernels, cfg.kernel_size, cfg.kernel_size}),
      agent_weights(name + ".agent_weights", {num_agents, cfg.channels, cfg.kernels}),
      cfg_(cfg),
      num_agents_(num_agents) {
    if (cfg.kernel_size % 2 == 0) throw std::invalid_argument("kernel size must be odd");
}

void Dccp::init(Rng& rng) {
    const double bound = 1.0 / static_cast<double>(cfg_.kernel_size);  // 1/sqrt(n*n)
    for (double& k : kernels.values) k = rng.uniform(-bound, bound);
    agent_weights.fill(1.0 / static_cast<double>(cfg_.kernels));
}

std::vector<std::vector<double>> Dccp::forward(const AgentTopology& topo,
                                               const std::vector<std::vector<double>>& inputs,
                                               DccpCache& cache) const {
    const std::size_t M = cfg_.channels, K = cfg_.kernels, n = cfg_.kernel_size;
    const std::size_t N = topo.num_agents();
    if (inputs.size() != N) throw std::invalid_argument("dccp: one input vector per agent required");
    for (const auto& x : inputs) {
        if (x.size() != M) throw std::invalid_argument("dccp: input vector length != channels");
    }
    if (N != num_agents_) throw std::invalid_argument("dccp: topology/agent count mismatch");

    const int H = topo.height, W = topo.width, half = static_cast<int>(n) / 2;
    cache.field.assign(M, std::vector<double>(static_cast<std::size_t>(H) * W, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        auto [r, c] = topo.positions[i];
        for (std::size_t m = 0; m < M; ++m) {
            cache.field[m][static_cast<std::size_t>(r) * W + c] = inputs[i][m];
        }
    }

    cache.u.assign(N, std::vector<double>(M * K, 0.0));
    std::vector<std::vector<double>> z(N, std::vector<double>(M, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        auto [r, c] = topo.positions[i];
        for (std::size_t m = 0; m < M; ++m) {
            const auto& field = cache.field[m];
            for (std::size_t k = 0; k < K; ++k) {
                const double* ker = &kernels.values[(m * K + k) * n * n];
                double acc = 0.0;
                for (int dr = -half; dr <= half; ++dr) {
                    const int rr = r + dr;
                    if (rr < 0 || rr >= H) continue;
                    for (int dc = -half; dc <= half; ++dc) {
                        const int cc = c + dc;
                        if (cc < 0 || cc >= W) continue;
                        acc += ker[(dr + half) * static_cast<int>(n) + (dc + half)] *
                               field[static_cast<std::size_t>(rr) * W + cc];
                    }
                }
                cache.u[i][m * K + k] = acc;
                z[i][m] += acc * agent_weights.values[(i * M + m) * K + k];
            }
        }
    }
    cache.valid = true;
    return z;
}

std::vector<std::vector<double>> Dccp::backward(const AgentTopology& topo,
                                                const DccpCache& cache,
                                                const std::vector<std::vector<double>>& dz) {
    if (!cache.valid) throw std::logic_error("dccp: backward called without a forward cache");
    const std::size_t M = cfg_.channels, K = cfg_.kernels, n = cfg_.kernel_size;
    const std::size_t N = topo.num_agents();
    const int H = topo.height, W = topo.width, half = static_cast<int>(n) / 2;

    // cotangent of the padded field, folded back to agent inputs at the end
    std::vector<std::vector<double>> dfield(M, std::vector<double>(static_cast<std::size_t>(H) * W, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        auto [r, c] = topo.positions[i];
        for (std::size_t m = 0; m < M; ++m) {
            const double dzm = dz[i][m];
            if (dzm == 0.0) continue;
            const auto& field = cache.field[m];
            for (std::size_t k = 0; k < K; ++k) {
                const std::size_t wi = (i * M + m) * K + k;
                agent_weights.grads[wi] += cache.u[i][m * K + k] * dzm;
                const double du = agent_weights.values[wi] * dzm;
                if (du == 0.0) continue;
                double* kg = &kernels.grads[(m * K + k) * n * n];
                const double* ker = &kernels.values[(m * K + k) * n * n];
                for (int dr = -half; dr <= half; ++dr) {
                    const int rr = r + dr;
                    if (rr < 0 || rr >= H) continue;
                    for (int dc = -half; dc <= half; ++dc) {
                        const int cc = c + dc;
                        if (cc < 0 || cc >= W) continue;
                        const int t = (dr + half) * static_cast<int>(n) + (dc + half);
                        kg[t] += du * field[static_cast<std::size_t>(rr) * W + cc];
                        dfield[m][static_cast<std::size_t>(rr) * W + cc] += du * ker[t];
                    }
                }
            }
        }
    }

    std::vector<std::vector<double>> dinputs(N, std::vector<double>(M, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        auto [r, c] = topo.positions[i];
        for (std::size_t m = 0; m < M; ++m) {
            dinputs[i][m] = dfield[m][static_cast<std::size_t>(r) * W + c];
        }
    }
    return dinputs;
}

}  // namespace marlcom
