#include "proteoknight/sequence.hpp"

#include <fstream>
#include <sstream>

#include "proteoknight/error.hpp"

namespace proteoknight {

namespace {

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Returns the offset of the first byte that makes `text` invalid UTF-8 (or
// contains NUL), or npos.
std::size_t first_invalid_byte(std::string_view text) noexcept {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const auto b = static_cast<unsigned char>(text[i]);
        if (b == 0) return i;
        if (b < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t min_cp;
        if ((b & 0xE0) == 0xC0) {
            len = 2;
            min_cp = 0x80;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            min_cp = 0x800;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            min_cp = 0x10000;
        } else {
            return i;
        }
        if (i + len > n) return i;
        std::uint32_t cp = b & (0x7F >> len);
        for (std::size_t k = 1; k < len; ++k) {
            const auto c = static_cast<unsigned char>(text[i + k]);
            if ((c & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (c & 0x3F);
        }
        if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

std::string_view trim_line(std::string_view line) noexcept {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    return line;
}

char to_upper(char c) noexcept { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

}  // namespace

std::vector<ProteinSequence> parse_fasta(std::string_view text, SanitizePolicy policy) {
    if (auto bad = first_invalid_byte(text); bad != std::string_view::npos)
        throw ParseError("input is not valid UTF-8 text", bad);

    std::vector<ProteinSequence> out;
    ProteinSequence* current = nullptr;
    std::size_t record_offset = 0;

    auto finish = [&]() {
        if (current && current->residues.empty()) {
            if (current->skipped > 0)
                throw ParseError("record '" + current->id + "' has no standard residues", record_offset);
            throw ParseError("record '" + current->id + "' has an empty body", record_offset);
        }
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = trim_line(text.substr(pos, eol - pos));
        const std::size_t line_offset = pos;
        pos = eol + 1;

        if (!line.empty() && line.front() == '>') {
            finish();
            std::string_view header = line.substr(1);
            std::size_t b = 0;
            while (b < header.size() && is_space(header[b])) ++b;
            std::size_t e = b;
            while (e < header.size() && !is_space(header[e])) ++e;
            if (e == b) throw ParseError("header with empty id", line_offset);
            out.push_back(ProteinSequence{std::string(header.substr(b, e - b)), {}, 0});
            current = &out.back();
            record_offset = line_offset;
            continue;
        }

        for (std::size_t k = 0; k < line.size(); ++k) {
            const char c = line[k];
            if (is_space(c)) continue;
            if (!current) throw ParseError("sequence data before the first '>' header", line_offset + k);
            const char u = to_upper(c);
            if (is_residue(u)) {
                current->residues.push_back(u);
            } else if (policy == SanitizePolicy::strict) {
                throw ParseError("record '" + current->id + "' contains non-standard residue '" +
                                     std::string(1, c) + "'",
                                 line_offset + k);
            } else {
                ++current->skipped;
            }
        }
    }
    finish();
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("error reading '" + path + "'");
    return std::move(ss).str();
}

std::vector<ProteinSequence> read_fasta_file(const std::string& path, SanitizePolicy policy) {
    const std::string text = read_file(path);
    try {
        return parse_fasta(text, policy);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.reason(), e.offset());
    }
}

std::string format_fasta(const std::vector<ProteinSequence>& seqs, std::size_t line_width) {
    std::string out;
    for (const auto& s : seqs) {
        out += '>';
        out += s.id;
        out += '\n';
        for (std::size_t i = 0; i < s.residues.size(); i += line_width) {
            out.append(s.residues, i, line_width);
            out += '\n';
        }
    }
    return out;
}

namespace {

constexpr std::array<std::pair<ClassKind, std::string_view>, 10> kLabelNames = {{
    {ClassKind::non_pvp, "non-PVP"},
    {ClassKind::pvp, "PVP"},
    {ClassKind::baseplate, "Baseplate"},
    {ClassKind::portal, "Portal"},
    {ClassKind::tail_fiber, "Tail Fiber"},
    {ClassKind::major_capsid, "Major Capsid"},
    {ClassKind::minor_capsid, "Minor Capsid"},
    {ClassKind::major_tail, "Major Tail"},
    {ClassKind::minor_tail, "Minor Tail"},
    {ClassKind::others, "Others"},
}};

}  // namespace

std::string_view label_name(ClassLabel label) noexcept {
    for (const auto& [kind, name] : kLabelNames)
        if (kind == label.kind) return name;
    return "?";
}

std::optional<ClassLabel> parse_label(std::string_view name) noexcept {
    for (const auto& [kind, n] : kLabelNames)
        if (n == name) return ClassLabel{kind};
    return std::nullopt;
}

ClassLabel multiclass_label(int index) {
    if (index < 0 || index >= kNumMulticlass) throw std::out_of_range("multiclass index out of range");
    return ClassLabel{static_cast<ClassKind>(static_cast<int>(ClassKind::baseplate) + index)};
}

LabelMap load_manifest(std::string_view text) {
    LabelMap out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = trim_line(text.substr(pos, eol - pos));
        const std::size_t line_offset = pos;
        pos = eol + 1;
        ++line_no;

        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0 || line.find('\t', tab + 1) != std::string_view::npos)
            throw ParseError("manifest line " + std::to_string(line_no) + " is not `id<TAB>label`",
                             line_offset);
        const std::string_view id = line.substr(0, tab);
        const std::string_view name = line.substr(tab + 1);
        const auto label = parse_label(name);
        if (!label)
            throw ParseError("manifest line " + std::to_string(line_no) + ": unknown label '" +
                                 std::string(name) + "'",
                             line_offset);
        auto [it, inserted] = out.emplace(std::string(id), *label);
        if (!inserted && it->second != *label)
            throw ParseError("manifest id '" + std::string(id) + "' has conflicting labels '" +
                                 std::string(label_name(it->second)) + "' and '" + std::string(name) + "'",
                             line_offset);
    }
    return out;
}

LabelMap read_manifest_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return load_manifest(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.reason(), e.offset());
    }
}

}  // namespace proteoknight
