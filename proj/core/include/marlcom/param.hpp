#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace marlcom {

// A named, shaped array of values with a paired gradient buffer.
// The unit of optimization: optimizers, checkpoints, and the gradient
// checker all operate on flat lists of these.
struct ParameterBlock {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::vector<double> grads;

    ParameterBlock() = default;
    ParameterBlock(std::string name, std::vector<std::size_t> shape);

    std::size_t size() const { return values.size(); }
    void zero_grads();
    void fill(double v);
};

using ParamRefs = std::vector<ParameterBlock*>;

std::size_t total_params(const ParamRefs& blocks);

}  // namespace marlcom
