#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace proteoknight {

// Row of the encoder's index TSV: `id<TAB>path<TAB>label`. Split manifests
// (train.tsv / test.tsv) share this layout.
struct IndexRecord {
    std::string id;
    std::string path;
    std::string label;  // label name, or "unknown"

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

inline constexpr std::string_view kUnknownLabel = "unknown";

std::string format_index(const std::vector<IndexRecord>& rows);
std::vector<IndexRecord> parse_index(std::string_view text);
std::vector<IndexRecord> read_index_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// Splits on '\n' (dropping '\r'); skips blank and '#' lines.
std::vector<std::vector<std::string_view>> split_tsv(std::string_view text);

}  // namespace proteoknight
