#include "marlcom/traffic_env.hpp"

#include <stdexcept>

namespace marlcom {

namespace {

// lanes released by each phase
constexpr std::array<std::array<int, 2>, TrafficGridLite::kPhases> kServed = {{
    {TrafficGridLite::kFromEStraight, TrafficGridLite::kFromWStraight},  // EW-S
    {TrafficGridLite::kFromELeft, TrafficGridLite::kFromWLeft},          // EW-L
    {TrafficGridLite::kFromWStraight, TrafficGridLite::kFromWLeft},      // W-LS
    {TrafficGridLite::kFromEStraight, TrafficGridLite::kFromELeft},      // E-LS
    {TrafficGridLite::kFromN, TrafficGridLite::kFromS},                  // NS-LS
}};

TrafficGridLite::Heading left_of(TrafficGridLite::Heading h) {
    using H = TrafficGridLite::Heading;
    switch (h) {
        case H::kEast: return H::kNorth;
        case H::kWest: return H::kSouth;
        case H::kSouth: return H::kEast;
        case H::kNorth: return H::kWest;
    }
    return H::kEast;
}

}  // namespace

double TrafficGridLite::Flow::rate_at(int t) const {
    if (t < t_start || t > t_end) return 0.0;
    if (t <= t_peak) {
        const int span = t_peak - t_start;
        return span == 0 ? peak_rate : peak_rate * (t - t_start) / static_cast<double>(span);
    }
    const int span = t_end - t_peak;
    return span == 0 ? peak_rate : peak_rate * (t_end - t) / static_cast<double>(span);
}

TrafficGridLite::Config TrafficGridLite::Config::defaults() {
    Config cfg;
    // Two flow groups: main E-W streets (straight plus a light left-turn
    // share) and side N-S avenues, peaking at different times.
    cfg.flows = {
        {Heading::kEast, false, 0.60, 0, 36, 96},
        {Heading::kWest, false, 0.60, 0, 36, 96},
        {Heading::kEast, true, 0.15, 0, 36, 96},
        {Heading::kWest, true, 0.15, 0, 36, 96},
        {Heading::kSouth, false, 0.30, 24, 72, 120},
        {Heading::kNorth, false, 0.30, 24, 72, 120},
    };
    return cfg;
}

TrafficGridLite::Config TrafficGridLite::Config::from_json(const nlohmann::json& spec) {
    Config cfg = defaults();
    cfg.height = spec.value("height", cfg.height);
    cfg.width = spec.value("width", cfg.width);
    cfg.horizon = spec.value("horizon", cfg.horizon);
    cfg.saturation = spec.value("saturation", cfg.saturation);
    cfg.delay_weight = spec.value("delay_weight", cfg.delay_weight);
    if (spec.contains("flows")) {
        cfg.flows.clear();
        static const std::map<std::string, Heading> headings = {
            {"E", Heading::kEast}, {"W", Heading::kWest},
            {"S", Heading::kSouth}, {"N", Heading::kNorth}};
        for (const auto& f : spec.at("flows")) {
            Flow flow;
            flow.heading = headings.at(f.at("heading").get<std::string>());
            flow.turn_left = f.value("turn_left", false);
            flow.peak_rate = f.at("peak_rate").get<double>();
            flow.t_start = f.value("t_start", 0);
            flow.t_peak = f.at("t_peak").get<int>();
            flow.t_end = f.at("t_end").get<int>();
            cfg.flows.push_back(flow);
        }
    }
    return cfg;
}

nlohmann::json TrafficGridLite::Config::to_json() const {
    nlohmann::json spec;
    spec["name"] = "traffic_grid_lite";
    spec["height"] = height;
    spec["width"] = width;
    spec["horizon"] = horizon;
    spec["saturation"] = saturation;
    spec["delay_weight"] = delay_weight;
    auto& fl = spec["flows"] = nlohmann::json::array();
    static const char* names[] = {"E", "W", "S", "N"};
    for (const auto& f : flows) {
        fl.push_back({{"heading", names[static_cast<int>(f.heading)]},
                      {"turn_left", f.turn_left},
                      {"peak_rate", f.peak_rate},
                      {"t_start", f.t_start},
                      {"t_peak", f.t_peak},
                      {"t_end", f.t_end}});
    }
    return spec;
}

TrafficGridLite::TrafficGridLite(Config cfg) : cfg_(std::move(cfg)) {
    if (cfg_.height < 1 || cfg_.width < 1 || cfg_.horizon < 1 || cfg_.saturation < 0) {
        throw std::invalid_argument("traffic_grid_lite: invalid configuration");
    }
    for (const auto& f : cfg_.flows) {
        if (f.peak_rate < 0.0 || f.t_peak < f.t_start || f.t_end < f.t_peak) {
            throw std::invalid_argument("traffic_grid_lite: invalid flow");
        }
    }
    topo_ = AgentTopology::full_grid(cfg_.height, cfg_.width);
}

std::vector<std::vector<double>> TrafficGridLite::reset(std::uint64_t seed) {
    rng_.emplace(seed);
    lanes_.assign(intersection_count() * kLanes, {});
    phase_.assign(intersection_count(), -1);
    step_ = 0;
    done_ = false;
    arrived_ = 0;
    exited_ = 0;
    return observations();  // empty network: all zeros
}

StepResult TrafficGridLite::step(const std::vector<int>& actions) {
    if (done_) throw std::logic_error("traffic_grid_lite: step after done");
    if (actions.size() != intersection_count()) {
        throw std::invalid_argument("traffic_grid_lite: one phase per intersection required");
    }

    // service, based on start-of-step queues; a phase switch blocks
    // release for one step (yellow)
    std::vector<std::pair<int, Vehicle>> released;
    for (std::size_t i = 0; i < intersection_count(); ++i) {
        const int p = actions[i];
        if (p < 0 || p >= kPhases) throw std::invalid_argument("traffic_grid_lite: bad phase index");
        const bool switching = phase_[i] >= 0 && phase_[i] != p;
        phase_[i] = p;
        if (switching) continue;
        for (int l : kServed[p]) {
            LaneState& ls = lane(static_cast<int>(i), l);
            for (int s = 0; s < cfg_.saturation && !ls.queue.empty(); ++s) {
                released.emplace_back(static_cast<int>(i), ls.queue.front());
                ls.queue.pop_front();
                ls.head_wait = 0;
            }
        }
    }
    for (auto& [inter, v] : released) deliver(inter, v);

    spawn_arrivals();

    for (auto& ls : lanes_) {
        if (ls.queue.empty()) ls.head_wait = 0;
        else ++ls.head_wait;
    }

    ++step_;
    StepResult result;
    result.obs = observations();
    result.rewards = rewards();
    result.done = step_ >= cfg_.horizon;
    done_ = result.done;
    return result;
}

void TrafficGridLite::inject_vehicle(int intersection, int lane_index, Heading heading,
                                     bool turn_left) {
    if (done_) throw std::logic_error("traffic_grid_lite: inject before reset");
    if (intersection < 0 || intersection >= static_cast<int>(intersection_count()) ||
        lane_index < 0 || lane_index >= kLanes) {
        throw std::invalid_argument("traffic_grid_lite: bad injection target");
    }
    lane(intersection, lane_index).queue.push_back({heading, turn_left});
    ++arrived_;
}

void TrafficGridLite::deliver(int from_inter, Vehicle v) {
    const int r = from_inter / cfg_.width;
    const int c = from_inter % cfg_.width;
    Heading h = v.turn_left ? left_of(v.heading) : v.heading;
    int nr = r, nc = c;
    switch (h) {
        case Heading::kEast: ++nc; break;
        case Heading::kWest: --nc; break;
        case Heading::kSouth: ++nr; break;
        case Heading::kNorth: --nr; break;
    }
    if (nr < 0 || nr >= cfg_.height || nc < 0 || nc >= cfg_.width) {
        ++exited_;
        return;
    }
    int l;
    switch (h) {
        case Heading::kEast: l = kFromWStraight; break;
        case Heading::kWest: l = kFromEStraight; break;
        case Heading::kSouth: l = kFromN; break;
        case Heading::kNorth: l = kFromS; break;
        default: l = kFromWStraight;
    }
    lane(nr * cfg_.width + nc, l).queue.push_back({h, false});
}

void TrafficGridLite::spawn_arrivals() {
    for (const auto& f : cfg_.flows) {
        const double rate = f.rate_at(step_);
        const bool east_west = f.heading == Heading::kEast || f.heading == Heading::kWest;
        const int count = east_west ? cfg_.height : cfg_.width;
        for (int k = 0; k < count; ++k) {
            int inter, l;
            switch (f.heading) {
                case Heading::kEast:
                    inter = k * cfg_.width;
                    l = f.turn_left ? kFromWLeft : kFromWStraight;
                    break;
                case Heading::kWest:
                    inter = k * cfg_.width + (cfg_.width - 1);
                    l = f.turn_left ? kFromELeft : kFromEStraight;
                    break;
                case Heading::kSouth:
                    inter = k;
                    l = kFromN;
                    break;
                case Heading::kNorth:
                default:
                    inter = (cfg_.height - 1) * cfg_.width + k;
                    l = kFromS;
                    break;
            }
            const int n = rng_->poisson(rate);
            for (int v = 0; v < n; ++v) {
                lane(inter, l).queue.push_back({f.heading, east_west && f.turn_left});
            }
            arrived_ += n;
        }
    }
}

std::vector<std::vector<double>> TrafficGridLite::observations() const {
    std::vector<std::vector<double>> obs(intersection_count(), std::vector<double>(obs_size()));
    for (std::size_t i = 0; i < intersection_count(); ++i) {
        for (int l = 0; l < kLanes; ++l) {
            const LaneState& ls = lane(static_cast<int>(i), l);
            obs[i][2 * l] = static_cast<double>(ls.head_wait);
            obs[i][2 * l + 1] = static_cast<double>(ls.queue.size());
        }
    }
    return obs;
}

std::vector<double> TrafficGridLite::rewards() const {
    std::vector<double> r(intersection_count(), 0.0);
    for (std::size_t i = 0; i < intersection_count(); ++i) {
        double penalty = 0.0;
        for (int l = 0; l < kLanes; ++l) {
            const LaneState& ls = lane(static_cast<int>(i), l);
            penalty += static_cast<double>(ls.queue.size()) + cfg_.delay_weight * ls.head_wait;
        }
        r[i] = -penalty;
    }
    return r;
}

long TrafficGridLite::vehicles_queued() const {
    long total = 0;
    for (const auto& ls : lanes_) total += static_cast<long>(ls.queue.size());
    return total;
}

std::map<std::string, double> TrafficGridLite::step_metrics() const {
    const double inters = static_cast<double>(intersection_count());
    double wait = 0.0;
    for (const auto& ls : lanes_) wait += ls.head_wait;
    return {{"queue_len", static_cast<double>(vehicles_queued()) / inters},
            {"time_delay", wait / inters}};
}

nlohmann::json TrafficGridLite::state_summary() const {
    return {{"step", step_},
            {"arrived", arrived_},
            {"exited", exited_},
            {"queued", vehicles_queued()}};
}

}  // namespace marlcom
