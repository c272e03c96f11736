#pragma once

#include <string>
#include <vector>

#include "marlcom/dccp.hpp"
#include "marlcom/topology.hpp"

namespace marlcom {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // observed error / statistic
    double threshold = 0.0;  // pinned bound
};

struct CheckSuite {
    std::string name;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// Independent reference for dccp_forward: iterates agent pairs directly
// from positions instead of building a padded field.
std::vector<std::vector<double>> dccp_reference_forward(
    const Dccp& dccp, const AgentTopology& topo,
    const std::vector<std::vector<double>>& inputs);

// Finite-difference checks (h=1e-5, rel err < 1e-4) over dense layers,
// DCCP forward, PRN loss, OPN loss, and the end-to-end Bellman loss.
CheckSuite gradient_suite();

// dccp_forward vs the reference on random fixtures (grids up to 4x4,
// M <= 5, K <= 4), agreement to 1e-12.
CheckSuite convolution_oracle_suite(std::size_t cases = 200);

// mean_action brute force, zero-compensation mean-field estimate, and
// the Taylor remainder bound on quadratic probes.
CheckSuite mean_field_oracle_suite(std::size_t remainder_trials = 10000);

}  // namespace marlcom
