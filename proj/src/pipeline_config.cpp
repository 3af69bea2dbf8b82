#include "proteoknight/pipeline_config.hpp"

#include <charconv>
#include <vector>

#include "proteoknight/error.hpp"

namespace proteoknight {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw DataError("config key '" + std::string(key) + "': bad value '" + std::string(value) + "'");
    return out;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view value) {
    std::vector<T> out;
    while (!value.empty()) {
        const std::size_t comma = value.find(',');
        out.push_back(parse_number<T>(key, trim(value.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty())
            throw DataError("config line " + std::to_string(line_no) + " is not `key = value`");
        out[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

void PipelineConfig::apply(std::string_view key, std::string_view value) {
    if (key == "size") encoding.size = parse_number<int>(key, value);
    else if (key == "radius") encoding.radius = parse_number<double>(key, value);
    else if (key == "point_size") encoding.point_size = parse_number<int>(key, value);
    else if (key == "delta_pvp") split.delta_pvp = parse_number<std::size_t>(key, value);
    else if (key == "delta_nonpvp") split.delta_nonpvp = parse_number<std::size_t>(key, value);
    else if (key == "test_fraction") split.test_fraction = parse_number<double>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "input_size") network.input_size = parse_number<int>(key, value);
    else if (key == "conv_channels") network.conv_channels = parse_list<int>(key, value);
    else if (key == "hidden") network.hidden = parse_number<int>(key, value);
    else if (key == "epochs") train.epochs = parse_number<int>(key, value);
    else if (key == "batch_size") train.batch_size = parse_number<int>(key, value);
    else if (key == "learning_rate") train.learning_rate = parse_number<double>(key, value);
    else if (key == "dropout") train.dropout = parse_number<double>(key, value);
    else if (key == "optimizer") {
        if (value == "sgd") train.optimizer = TrainConfig::Optimizer::sgd;
        else if (value == "adam") train.optimizer = TrainConfig::Optimizer::adam;
        else throw DataError("config key 'optimizer': expected sgd or adam");
    } else if (key == "passes") mcd.passes = parse_number<int>(key, value);
    else if (key == "dropout_rates") mcd.dropout_rates = parse_list<double>(key, value);
    else if (key == "samples_per_category") mcd.samples_per_category = parse_number<std::size_t>(key, value);
    else throw DataError("unknown config key '" + std::string(key) + "'");
}

PipelineConfig load_pipeline_config(std::string_view text) {
    PipelineConfig cfg;
    for (const auto& [k, v] : parse_key_values(text)) cfg.apply(k, v);
    return cfg;
}

PipelineConfig read_pipeline_config(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return load_pipeline_config(text);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace proteoknight
