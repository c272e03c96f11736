#pragma once

#include <functional>
#include <span>
#include <vector>

#include "marlcom/rng.hpp"

namespace marlcom {

struct MeanAction {
    std::vector<double> probs;
    bool isolated = false;  // empty neighbor set; probs is uniform
};

// Elementwise average of one-hot neighbor actions (a point on the action
// simplex). Empty neighbor list yields the uniform vector, flagged.
MeanAction mean_action(const std::vector<std::vector<double>>& neighbor_actions,
                       std::size_t action_size);

// Argmax with ties broken toward the lowest index.
int argmax_lowest(std::span<const double> q);

// MF-Q baseline action estimate: greedy action of a Q-head fed with
// (own observation, mean of previous neighbor actions).
int mfq_estimate_action(
    const std::function<std::vector<double>(std::span<const double> obs,
                                            std::span<const double> mean)>& q_head,
    std::span<const double> obs,
    const std::vector<std::vector<double>>& prev_neighbor_actions,
    std::size_t action_size);

// Synthetic twice-differentiable Q over relaxed (continuous) action
// vectors: Q(a) = q0 + g.a + 0.5 a'Ha with ||H||_2 <= smoothness by
// construction. Numerical oracle for the dropped Taylor remainder.
struct QuadraticProbe {
    std::size_t dim = 0;
    double smoothness = 0.0;  // spectral bound on the Hessian
    double q0 = 0.0;
    std::vector<double> g;
    std::vector<double> hessian;  // dim x dim, symmetric

    double value(std::span<const double> a) const;
    std::vector<double> gradient(std::span<const double> a) const;
    // quadratic form d'Hd
    double remainder(std::span<const double> d) const;

    // Random symmetric Hessian with eigenvalues in [-smoothness, smoothness].
    static QuadraticProbe random(Rng& rng, std::size_t dim, double smoothness);
    static QuadraticProbe linear(Rng& rng, std::size_t dim);  // zero Hessian
};

struct RemainderStats {
    double max_abs_remainder = 0.0;   // max |d'Hd| over all trials
    double max_taylor_gap = 0.0;      // |Q(s,a)-Q(s,a^j,abar) - mean(1st order + R/2)|
    double max_first_order = 0.0;     // |sum_k grad.delta_k| (should vanish)
    std::size_t trials = 0;
    bool bound_violated = false;
};

// Random one-hot neighbor configurations against the probe: checks the
// exact quadratic remainder stays within [-2*smoothness, 2*smoothness]
// and the Taylor identity for the factorized Q-difference.
RemainderStats remainder_bound_check(const QuadraticProbe& probe, Rng& rng,
                                     std::size_t trials, std::size_t max_neighbors = 8);

}  // namespace marlcom
