#pragma once

#include <cstdint>
#include <vector>

#include "marlcom/param.hpp"

namespace marlcom {

struct OptimizerConfig {
    double lr = 1e-3;
    bool adaptive = true;  // false: plain SGD
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adaptive-moment optimizer with a plain-SGD fallback mode.
// Owns first/second moment buffers per registered block; step() applies
// the update and zeroes the grad buffers.
class Optimizer {
public:
    Optimizer(OptimizerConfig cfg, ParamRefs blocks);

    // Throws std::runtime_error naming the offending block on NaN/Inf grads.
    void step();

    std::uint64_t step_count() const { return steps_; }
    const OptimizerConfig& config() const { return cfg_; }

private:
    OptimizerConfig cfg_;
    ParamRefs blocks_;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    std::uint64_t steps_ = 0;
};

// Rescales all grads so their joint L2 norm is at most max_norm.
// Returns the pre-clip norm. max_norm <= 0 leaves grads untouched.
double clip_grad_norm(const ParamRefs& blocks, double max_norm);

}  // namespace marlcom
