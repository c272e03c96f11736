#pragma once

#include <cstdint>
#include <random>

namespace marlcom {

// Seeded generator owned by one run; every stochastic draw in training
// and in the environments goes through one of these.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    // integer in [0, n)
    int uniform_int(int n) {
        return std::uniform_int_distribution<int>(0, n - 1)(gen_);
    }

    bool bernoulli(double p) {
        return std::bernoulli_distribution(p)(gen_);
    }

    int poisson(double rate) {
        if (rate <= 0.0) return 0;
        return std::poisson_distribution<int>(rate)(gen_);
    }

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
};

}  // namespace marlcom
