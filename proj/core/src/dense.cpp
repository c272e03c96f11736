#include "marlcom/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace marlcom {

DenseLayer::DenseLayer(std::string name, std::size_t in, std::size_t out, Activation act)
    : weight(name + ".weight", {out, in}),
      bias(name + ".bias", {out}),
      activation(act),
      in_(in),
      out_(out) {}

void DenseLayer::init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_));
    for (double& w : weight.values) w = rng.uniform(-bound, bound);
    for (double& b : bias.values) b = rng.uniform(-bound, bound);
}

std::vector<double> DenseLayer::forward(std::span<const double> x, DenseCache& cache) const {
    if (x.size() != in_) {
        throw std::invalid_argument(weight.name + ": input size " + std::to_string(x.size()) +
                                    " != " + std::to_string(in_));
    }
    cache.input.assign(x.begin(), x.end());
    cache.pre.resize(out_);
    std::vector<double> y(out_);
    for (std::size_t o = 0; o < out_; ++o) {
        double acc = bias.values[o];
        const double* wrow = &weight.values[o * in_];
        for (std::size_t i = 0; i < in_; ++i) acc += wrow[i] * x[i];
        cache.pre[o] = acc;
        y[o] = (activation == Activation::kRelu && acc < 0.0) ? 0.0 : acc;
    }
    cache.valid = true;
    return y;
}

std::vector<double> DenseLayer::backward(const DenseCache& cache, std::span<const double> dy) {
    if (!cache.valid) {
        throw std::logic_error(weight.name + ": backward called without a forward cache");
    }
    if (dy.size() != out_) {
        throw std::invalid_argument(weight.name + ": cotangent size mismatch");
    }
    std::vector<double> dx(in_, 0.0);
    for (std::size_t o = 0; o < out_; ++o) {
        double d = dy[o];
        if (activation == Activation::kRelu && cache.pre[o] < 0.0) d = 0.0;
        if (d == 0.0) continue;
        bias.grads[o] += d;
        double* wg = &weight.grads[o * in_];
        const double* wrow = &weight.values[o * in_];
        for (std::size_t i = 0; i < in_; ++i) {
            wg[i] += d * cache.input[i];
            dx[i] += d * wrow[i];
        }
    }
    return dx;
}

}  // namespace marlcom
