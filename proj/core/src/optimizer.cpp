#include "marlcom/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace marlcom {

Optimizer::Optimizer(OptimizerConfig cfg, ParamRefs blocks)
    : cfg_(cfg), blocks_(std::move(blocks)) {
    m_.reserve(blocks_.size());
    v_.reserve(blocks_.size());
    for (const auto* b : blocks_) {
        m_.emplace_back(b->size(), 0.0);
        v_.emplace_back(b->size(), 0.0);
    }
}

void Optimizer::step() {
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double bc1 = 1.0 - std::pow(cfg_.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg_.beta2, t);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        ParameterBlock& blk = *blocks_[bi];
        for (std::size_t i = 0; i < blk.size(); ++i) {
            const double g = blk.grads[i];
            if (!std::isfinite(g)) {
                throw std::runtime_error("non-finite gradient in block '" + blk.name +
                                         "' at index " + std::to_string(i));
            }
            if (cfg_.adaptive) {
                double& m = m_[bi][i];
                double& v = v_[bi][i];
                m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
                v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m / bc1;
                const double vhat = v / bc2;
                blk.values[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            } else {
                blk.values[i] -= cfg_.lr * g;
            }
            if (!std::isfinite(blk.values[i])) {
                throw std::runtime_error("non-finite value in block '" + blk.name +
                                         "' after update at index " + std::to_string(i));
            }
            blk.grads[i] = 0.0;
        }
    }
}

double clip_grad_norm(const ParamRefs& blocks, double max_norm) {
    double sq = 0.0;
    for (const ParameterBlock* blk : blocks) {
        for (double g : blk->grads) sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (ParameterBlock* blk : blocks) {
            for (double& g : blk->grads) g *= scale;
        }
    }
    return norm;
}

}  // namespace marlcom
