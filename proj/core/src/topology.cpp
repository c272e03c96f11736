#include "marlcom/topology.hpp"

#include <stdexcept>

namespace marlcom {

AgentTopology AgentTopology::full_grid(int height, int width, int patch) {
    std::vector<std::pair<int, int>> pos;
    pos.reserve(static_cast<std::size_t>(height) * width);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) pos.emplace_back(r, c);
    return from_positions(height, width, std::move(pos), patch);
}

AgentTopology AgentTopology::from_positions(int height, int width,
                                            std::vector<std::pair<int, int>> positions,
                                            int patch) {
    if (patch < 1 || patch % 2 == 0) throw std::invalid_argument("patch size must be odd");
    AgentTopology t;
    t.height = height;
    t.width = width;
    t.patch = patch;
    t.positions = std::move(positions);
    t.cell_agent.assign(static_cast<std::size_t>(height) * width, -1);
    for (std::size_t i = 0; i < t.positions.size(); ++i) {
        auto [r, c] = t.positions[i];
        if (r < 0 || r >= height || c < 0 || c >= width) {
            throw std::invalid_argument("agent position out of bounds");
        }
        int& cell = t.cell_agent[static_cast<std::size_t>(r) * width + c];
        if (cell != -1) throw std::invalid_argument("two agents share a cell");
        cell = static_cast<int>(i);
    }
    const int half = patch / 2;
    t.neighbors.resize(t.positions.size());
    for (std::size_t i = 0; i < t.positions.size(); ++i) {
        auto [r, c] = t.positions[i];
        for (int dr = -half; dr <= half; ++dr) {
            for (int dc = -half; dc <= half; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int j = t.agent_at(r + dr, c + dc);
                if (j >= 0) t.neighbors[i].push_back(j);
            }
        }
    }
    return t;
}

}  // namespace marlcom
