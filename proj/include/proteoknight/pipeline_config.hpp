#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "proteoknight/dataset.hpp"
#include "proteoknight/encoder.hpp"
#include "proteoknight/mcd.hpp"
#include "proteoknight/network.hpp"

namespace proteoknight {

// Every stage's settings in one place. Loaded from a flat `key = value`
// file, then overridden by command-line flags; each stage validates its own
// slice.
struct PipelineConfig {
    EncodingConfig encoding;
    SplitConfig split;
    NetworkSpec network;
    TrainConfig train;
    McdConfig mcd;
    std::optional<std::uint64_t> seed;  // shared by split, train and mcd

    void apply(std::string_view key, std::string_view value);
};

// `key = value` lines; blank lines and '#' comments ignored. Throws
// DataError on malformed lines or unknown keys.
std::map<std::string, std::string> parse_key_values(std::string_view text);
PipelineConfig load_pipeline_config(std::string_view text);
PipelineConfig read_pipeline_config(const std::string& path);

}  // namespace proteoknight
