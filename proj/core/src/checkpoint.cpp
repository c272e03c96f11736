#include "marlcom/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace marlcom {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void save_checkpoint(const std::string& prefix, const ParamRefs& blocks,
                     const nlohmann::json& metadata) {
    nlohmann::json manifest;
    manifest["format"] = "marlcom-ckpt-v1";
    manifest["metadata"] = metadata;
    auto& list = manifest["blocks"] = nlohmann::json::array();
    for (const auto* b : blocks) {
        list.push_back({{"name", b->name}, {"shape", b->shape}});
    }
    std::ofstream mf(prefix + ".json");
    if (!mf) throw std::runtime_error("cannot write " + prefix + ".json");
    mf << manifest.dump(2) << "\n";

    std::ofstream bf(prefix + ".bin", std::ios::binary);
    if (!bf) throw std::runtime_error("cannot write " + prefix + ".bin");
    for (const auto* b : blocks) {
        bf.write(reinterpret_cast<const char*>(b->values.data()),
                 static_cast<std::streamsize>(b->values.size() * sizeof(double)));
    }
}

nlohmann::json load_checkpoint(const std::string& prefix, const ParamRefs& blocks) {
    std::ifstream mf(prefix + ".json");
    if (!mf) throw std::runtime_error("cannot read " + prefix + ".json");
    nlohmann::json manifest = nlohmann::json::parse(mf);
    const auto& list = manifest.at("blocks");
    if (list.size() != blocks.size()) {
        throw std::runtime_error("checkpoint block count mismatch");
    }
    std::ifstream bf(prefix + ".bin", std::ios::binary);
    if (!bf) throw std::runtime_error("cannot read " + prefix + ".bin");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        ParameterBlock& b = *blocks[i];
        if (list[i].at("name").get<std::string>() != b.name ||
            list[i].at("shape").get<std::vector<std::size_t>>() != b.shape) {
            throw std::runtime_error("checkpoint manifest mismatch for block '" + b.name + "'");
        }
        bf.read(reinterpret_cast<char*>(b.values.data()),
                static_cast<std::streamsize>(b.values.size() * sizeof(double)));
        if (!bf) throw std::runtime_error("checkpoint binary truncated at block '" + b.name + "'");
    }
    return manifest.at("metadata");
}

}  // namespace marlcom
