#include "proteoknight/index.hpp"

#include <charconv>
#include <fstream>

#include "proteoknight/error.hpp"
#include "proteoknight/sequence.hpp"

namespace proteoknight {

std::vector<std::vector<std::string_view>> split_tsv(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos
                                                                              : tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_index(const std::vector<IndexRecord>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.id;
        out += '\t';
        out += r.path;
        out += '\t';
        out += r.label;
        out += '\n';
    }
    return out;
}

std::vector<IndexRecord> parse_index(std::string_view text) {
    std::vector<IndexRecord> out;
    for (const auto& f : split_tsv(text)) {
        if (f.size() != 3 || f[0].empty())
            throw DataError("index row is not `id<TAB>path<TAB>label`: '" + std::string(f[0]) + "'");
        out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2])});
    }
    return out;
}

std::vector<IndexRecord> read_index_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_index(text);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("error writing '" + path + "'");
}

}  // namespace proteoknight
