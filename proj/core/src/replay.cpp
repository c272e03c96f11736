#include "marlcom/replay.hpp"

#include <stdexcept>

namespace marlcom {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
    ring_.reserve(capacity);
}

void ReplayBuffer::push(JointTransition t) {
    if (ring_.size() < capacity_) {
        ring_.push_back(std::move(t));
    } else {
        ring_[head_] = std::move(t);
        head_ = (head_ + 1) % capacity_;
    }
}

const JointTransition& ReplayBuffer::at(std::size_t logical) const {
    if (logical >= ring_.size()) throw std::out_of_range("replay index");
    return ring_[(head_ + logical) % ring_.size()];
}

std::vector<const JointTransition*> ReplayBuffer::sample(Rng& rng, std::size_t batch) const {
    if (ring_.empty()) throw std::logic_error("sampling from empty replay buffer");
    std::vector<const JointTransition*> out(batch);
    for (auto& p : out) p = &ring_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(ring_.size())))];
    return out;
}

}  // namespace marlcom
