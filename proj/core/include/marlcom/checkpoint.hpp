#pragma once

#include <string>

#include <json.hpp>

#include "marlcom/param.hpp"

namespace marlcom {

// Checkpoint = <prefix>.json manifest listing block names/shapes (plus
// caller metadata) and <prefix>.bin, a flat little-endian f64 dump of
// the concatenated values in manifest order.
void save_checkpoint(const std::string& prefix, const ParamRefs& blocks,
                     const nlohmann::json& metadata = nlohmann::json::object());

// Loads values into blocks; names and shapes must match the manifest.
// Returns the stored metadata.
nlohmann::json load_checkpoint(const std::string& prefix, const ParamRefs& blocks);

}  // namespace marlcom
