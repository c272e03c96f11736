#include "marlcom/mean_field.hpp"

#include <cmath>
#include <stdexcept>

namespace marlcom {

MeanAction mean_action(const std::vector<std::vector<double>>& neighbor_actions,
                       std::size_t action_size) {
    MeanAction out;
    if (neighbor_actions.empty()) {
        out.isolated = true;
        out.probs.assign(action_size, 1.0 / static_cast<double>(action_size));
        return out;
    }
    out.probs.assign(action_size, 0.0);
    for (const auto& a : neighbor_actions) {
        if (a.size() != action_size) throw std::invalid_argument("mean_action: length mismatch");
        for (std::size_t i = 0; i < action_size; ++i) out.probs[i] += a[i];
    }
    const double inv = 1.0 / static_cast<double>(neighbor_actions.size());
    for (double& p : out.probs) p *= inv;
    return out;
}

int argmax_lowest(std::span<const double> q) {
    if (q.empty()) throw std::invalid_argument("argmax of empty vector");
    int best = 0;
    for (std::size_t i = 1; i < q.size(); ++i) {
        if (q[i] > q[best]) best = static_cast<int>(i);
    }
    return best;
}

int mfq_estimate_action(
    const std::function<std::vector<double>(std::span<const double>, std::span<const double>)>& q_head,
    std::span<const double> obs,
    const std::vector<std::vector<double>>& prev_neighbor_actions,
    std::size_t action_size) {
    const MeanAction mean = mean_action(prev_neighbor_actions, action_size);
    const std::vector<double> q = q_head(obs, mean.probs);
    return argmax_lowest(q);
}

double QuadraticProbe::value(std::span<const double> a) const {
    double v = q0;
    for (std::size_t i = 0; i < dim; ++i) {
        v += g[i] * a[i];
        double hrow = 0.0;
        for (std::size_t j = 0; j < dim; ++j) hrow += hessian[i * dim + j] * a[j];
        v += 0.5 * a[i] * hrow;
    }
    return v;
}

std::vector<double> QuadraticProbe::gradient(std::span<const double> a) const {
    std::vector<double> grad(g.begin(), g.end());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) grad[i] += hessian[i * dim + j] * a[j];
    return grad;
}

double QuadraticProbe::remainder(std::span<const double> d) const {
    double r = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double hrow = 0.0;
        for (std::size_t j = 0; j < dim; ++j) hrow += hessian[i * dim + j] * d[j];
        r += d[i] * hrow;
    }
    return r;
}

QuadraticProbe QuadraticProbe::random(Rng& rng, std::size_t dim, double smoothness) {
    QuadraticProbe p;
    p.dim = dim;
    p.smoothness = smoothness;
    p.q0 = rng.uniform(-1.0, 1.0);
    p.g.resize(dim);
    for (double& gi : p.g) gi = rng.uniform(-1.0, 1.0);

    // H = Q diag(lambda) Q' with |lambda| <= smoothness, Q from
    // Gram-Schmidt on a random matrix -> spectral norm bound holds exactly.
    std::vector<std::vector<double>> basis(dim, std::vector<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) basis[i][j] = rng.uniform(-1.0, 1.0);
        for (std::size_t k = 0; k < i; ++k) {
            double dot = 0.0;
            for (std::size_t j = 0; j < dim; ++j) dot += basis[i][j] * basis[k][j];
            for (std::size_t j = 0; j < dim; ++j) basis[i][j] -= dot * basis[k][j];
        }
        double norm = 0.0;
        for (double v : basis[i]) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-9) {  // degenerate draw; use a unit vector
            basis[i].assign(dim, 0.0);
            basis[i][i] = 1.0;
        } else {
            for (double& v : basis[i]) v /= norm;
        }
    }
    std::vector<double> lambda(dim);
    for (double& l : lambda) l = rng.uniform(-smoothness, smoothness);
    p.hessian.assign(dim * dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                p.hessian[i * dim + j] += lambda[k] * basis[k][i] * basis[k][j];
    return p;
}

QuadraticProbe QuadraticProbe::linear(Rng& rng, std::size_t dim) {
    QuadraticProbe p;
    p.dim = dim;
    p.smoothness = 0.0;
    p.q0 = rng.uniform(-1.0, 1.0);
    p.g.resize(dim);
    for (double& gi : p.g) gi = rng.uniform(-1.0, 1.0);
    p.hessian.assign(dim * dim, 0.0);
    return p;
}

RemainderStats remainder_bound_check(const QuadraticProbe& probe, Rng& rng,
                                     std::size_t trials, std::size_t max_neighbors) {
    RemainderStats stats;
    stats.trials = trials;
    const std::size_t d = probe.dim;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t nk = 1 + static_cast<std::size_t>(rng.uniform_int(static_cast<int>(max_neighbors)));
        std::vector<std::vector<double>> actions(nk, std::vector<double>(d, 0.0));
        for (auto& a : actions) a[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(d)))] = 1.0;
        const MeanAction abar = mean_action(actions, d);
        const std::vector<double> grad_at_mean = probe.gradient(abar.probs);

        double first_order = 0.0;
        double taylor_sum = 0.0;  // mean of (1st order + R/2)
        double q_sum = 0.0;
        for (const auto& a : actions) {
            std::vector<double> delta(d);
            for (std::size_t i = 0; i < d; ++i) delta[i] = a[i] - abar.probs[i];
            const double r = probe.remainder(delta);
            if (std::fabs(r) > stats.max_abs_remainder) stats.max_abs_remainder = std::fabs(r);
            if (std::fabs(r) > 2.0 * probe.smoothness + 1e-12) stats.bound_violated = true;
            double fo = 0.0;
            for (std::size_t i = 0; i < d; ++i) fo += grad_at_mean[i] * delta[i];
            first_order += fo;
            taylor_sum += fo + 0.5 * r;
            q_sum += probe.value(a);
        }
        const double inv = 1.0 / static_cast<double>(nk);
        const double lhs = q_sum * inv - probe.value(abar.probs);
        const double gap = std::fabs(lhs - taylor_sum * inv);
        if (gap > stats.max_taylor_gap) stats.max_taylor_gap = gap;
        if (std::fabs(first_order * inv) > stats.max_first_order)
            stats.max_first_order = std::fabs(first_order * inv);
    }
    return stats;
}

}  // namespace marlcom
