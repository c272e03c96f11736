#include "marlcom/param.hpp"

#include <numeric>

namespace marlcom {

ParameterBlock::ParameterBlock(std::string name, std::vector<std::size_t> shape)
    : name(std::move(name)), shape(std::move(shape)) {
    std::size_t n = 1;
    for (std::size_t d : this->shape) n *= d;
    values.assign(n, 0.0);
    grads.assign(n, 0.0);
}

void ParameterBlock::zero_grads() {
    std::fill(grads.begin(), grads.end(), 0.0);
}

void ParameterBlock::fill(double v) {
    std::fill(values.begin(), values.end(), v);
}

std::size_t total_params(const ParamRefs& blocks) {
    std::size_t n = 0;
    for (const auto* b : blocks) n += b->size();
    return n;
}

}  // namespace marlcom
