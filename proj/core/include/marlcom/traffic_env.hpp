#pragma once

#include <array>
#include <deque>
#include <optional>

#include "marlcom/env.hpp"
#include "marlcom/rng.hpp"

namespace marlcom {

// Store-and-forward queueing model of a grid of signalized intersections.
// Each intersection has two-lane E-W streets (straight + left lanes per
// approach) and one-lane N-S avenues. A vehicle crosses one intersection
// per step when its lane is served; a phase switch forfeits one step of
// service (yellow). Observation per intersection: (time_delay, wave) per
// incoming lane. Reward: -(queue_len + w * time_delay) summed over lanes.
class TrafficGridLite final : public Env {
public:
    // incoming lanes, named by the side vehicles come from
    enum Lane : int {
        kFromEStraight = 0,
        kFromELeft = 1,
        kFromWStraight = 2,
        kFromWLeft = 3,
        kFromN = 4,
        kFromS = 5,
    };
    static constexpr int kLanes = 6;

    // phases (actions): EW-S, EW-L, W-LS, E-LS, NS-LS
    enum Phase : int { kEwS = 0, kEwL = 1, kWLs = 2, kELs = 3, kNsLs = 4 };
    static constexpr int kPhases = 5;

    enum class Heading : int { kEast = 0, kWest = 1, kSouth = 2, kNorth = 3 };

    struct Flow {
        Heading heading = Heading::kEast;
        bool turn_left = false;
        double peak_rate = 0.5;  // vehicles per step per entry lane
        int t_start = 0;
        int t_peak = 48;
        int t_end = 96;

        // piecewise-linear triangular rate
        double rate_at(int t) const;
    };

    struct Config {
        int height = 3;
        int width = 3;
        int horizon = 144;
        int saturation = 2;  // vehicles released per served lane per step
        double delay_weight = 0.2;
        std::vector<Flow> flows;

        static Config defaults();
        static Config from_json(const nlohmann::json& spec);
        nlohmann::json to_json() const;
    };

    explicit TrafficGridLite(Config cfg);

    std::vector<std::vector<double>> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<int>& actions) override;

    const AgentTopology& topology() const override { return topo_; }
    std::size_t obs_size() const override { return 2 * kLanes; }
    std::size_t action_size() const override { return kPhases; }
    bool timeout_is_terminal() const override { return false; }  // time limit

    std::map<std::string, double> step_metrics() const override;
    nlohmann::json state_summary() const override;

    // places a vehicle directly on a lane (counted as arrived); lets
    // tests set up exact queue states without going through the flows
    void inject_vehicle(int intersection, int lane_index, Heading heading,
                        bool turn_left);

    // conservation probes
    long vehicles_arrived() const { return arrived_; }
    long vehicles_exited() const { return exited_; }
    long vehicles_queued() const;

    const Config& config() const { return cfg_; }
    int current_step() const { return step_; }

private:
    struct Vehicle {
        Heading heading;
        bool turn_left;
    };
    struct LaneState {
        std::deque<Vehicle> queue;
        int head_wait = 0;
    };

    std::size_t intersection_count() const {
        return static_cast<std::size_t>(cfg_.height) * cfg_.width;
    }
    LaneState& lane(int inter, int l) { return lanes_[inter * kLanes + l]; }
    const LaneState& lane(int inter, int l) const { return lanes_[inter * kLanes + l]; }

    std::vector<std::vector<double>> observations() const;
    std::vector<double> rewards() const;
    void deliver(int from_inter, Vehicle v);
    void spawn_arrivals();

    Config cfg_;
    AgentTopology topo_;
    std::optional<Rng> rng_;
    std::vector<LaneState> lanes_;
    std::vector<int> phase_;  // -1 before the first action
    int step_ = 0;
    bool done_ = true;
    long arrived_ = 0;
    long exited_ = 0;
};

}  // namespace marlcom
