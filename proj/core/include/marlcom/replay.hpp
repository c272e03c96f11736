#pragma once

#include <vector>

#include "marlcom/rng.hpp"

namespace marlcom {

// One timestep's record for ALL agents, stored jointly so that any
// agent's predictions can be reconstructed from its neighbors'
// synchronized previous-step data.
struct JointTransition {
    int t = 0;
    std::vector<std::vector<double>> prev_obs;  // o_{t-1}
    std::vector<std::vector<double>> prev_q;    // q_{t-1}
    std::vector<std::vector<double>> obs;       // o_t
    std::vector<int> actions;                   // a_t
    std::vector<double> rewards;                // r_t
    std::vector<std::vector<double>> q;         // q_t (behavior-time values)
    std::vector<std::vector<double>> next_obs;  // o_{t+1}
    // mean of previous neighbor one-hot actions, behavior-time (MFQ input)
    std::vector<std::vector<double>> aux;
    std::vector<std::vector<double>> next_aux;
    bool terminal = false;
};

// FIFO ring with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(JointTransition t);
    std::size_t size() const { return ring_.size(); }
    std::size_t capacity() const { return capacity_; }

    const JointTransition& at(std::size_t logical) const;  // 0 = oldest
    std::vector<const JointTransition*> sample(Rng& rng, std::size_t batch) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next write slot once full
    std::vector<JointTransition> ring_;
};

}  // namespace marlcom
