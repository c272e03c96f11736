#include "marlcom/env.hpp"

#include <stdexcept>

#include "marlcom/sync_env.hpp"
#include "marlcom/traffic_env.hpp"

namespace marlcom {

std::unique_ptr<Env> make_env(const nlohmann::json& spec) {
    const std::string name = spec.at("name").get<std::string>();
    if (name == "traffic_grid_lite") {
        return std::make_unique<TrafficGridLite>(TrafficGridLite::Config::from_json(spec));
    }
    if (name == "sync_grid") {
        return std::make_unique<SyncGrid>(SyncGrid::Config::from_json(spec));
    }
    throw std::invalid_argument("unknown environment '" + name + "'");
}

}  // namespace marlcom
