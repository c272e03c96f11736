#pragma once

#include <span>
#include <string>
#include <vector>

#include "marlcom/param.hpp"
#include "marlcom/rng.hpp"

namespace marlcom {

enum class Activation { kIdentity, kRelu };

// Per-call forward cache; one per application of the layer, so the same
// layer can be applied to many agents before any backward pass.
struct DenseCache {
    std::vector<double> input;
    std::vector<double> pre;  // pre-activation
    bool valid = false;
};

class DenseLayer {
public:
    DenseLayer(std::string name, std::size_t in, std::size_t out, Activation act);

    // uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
    void init(Rng& rng);

    std::vector<double> forward(std::span<const double> x, DenseCache& cache) const;

    // Accumulates dW, db into the grad buffers; returns dx.
    std::vector<double> backward(const DenseCache& cache, std::span<const double> dy);

    std::size_t in_size() const { return in_; }
    std::size_t out_size() const { return out_; }
    ParamRefs params() { return {&weight, &bias}; }

    ParameterBlock weight;  // [out x in], row-major
    ParameterBlock bias;    // [out]
    Activation activation;

private:
    std::size_t in_;
    std::size_t out_;
};

}  // namespace marlcom
