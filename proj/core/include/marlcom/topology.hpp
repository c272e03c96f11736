#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace marlcom {

// Agent grid positions and neighbor sets, fixed per environment instance.
// Neighbor sets are derived from positions: all agents within the
// patch x patch window centered on an agent, excluding the agent itself.
struct AgentTopology {
    int height = 0;
    int width = 0;
    int patch = 3;  // odd
    std::vector<std::pair<int, int>> positions;   // agent -> (row, col)
    std::vector<std::vector<int>> neighbors;      // agent -> ordered N_i
    std::vector<int> cell_agent;                  // row*width+col -> agent or -1

    std::size_t num_agents() const { return positions.size(); }
    int agent_at(int row, int col) const {
        if (row < 0 || row >= height || col < 0 || col >= width) return -1;
        return cell_agent[static_cast<std::size_t>(row) * width + col];
    }

    // One agent per cell.
    static AgentTopology full_grid(int height, int width, int patch = 3);
    // Arbitrary placement; positions must be unique and in-bounds.
    static AgentTopology from_positions(int height, int width,
                                        std::vector<std::pair<int, int>> positions,
                                        int patch = 3);
};

}  // namespace marlcom
