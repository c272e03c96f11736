#pragma once

#include <functional>
#include <string>

#include "marlcom/param.hpp"

namespace marlcom {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_block;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

// Compares analytic gradients against central finite differences.
//   loss_fn: evaluates the scalar loss only (no grad side effects)
//   grad_fn: zeroes grads, runs forward+backward, returns the loss
// Relative error per entry: |a - n| / max(1, |n|).
GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           const std::function<double()>& grad_fn,
                           const ParamRefs& params, double h = 1e-5);

}  // namespace marlcom
