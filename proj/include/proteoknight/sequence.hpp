#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proteoknight {

// The 20 standard residues; position in this list drives the walk angle.
inline constexpr std::array<char, 20> kResidues = {'A', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'K', 'L',
                                                   'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'V', 'W', 'Y'};
inline constexpr int kNumResidues = static_cast<int>(kResidues.size());

// Index of an uppercase residue in kResidues, or -1.
constexpr int residue_index(char c) noexcept {
    for (int i = 0; i < kNumResidues; ++i)
        if (kResidues[static_cast<std::size_t>(i)] == c) return i;
    return -1;
}

constexpr bool is_residue(char c) noexcept { return residue_index(c) >= 0; }

struct ProteinSequence {
    std::string id;
    std::string residues;
    // Non-standard symbols dropped by the skip policy.
    std::size_t skipped = 0;

    std::size_t length() const noexcept { return residues.size(); }
};

enum class SanitizePolicy {
    skip,    // drop non-standard residues, count them
    strict,  // any non-standard residue is an error
};

// Parses FASTA text ('>' headers, wrapped sequence lines, LF or CRLF).
// The id is the first whitespace-delimited token of the header. Residues are
// uppercased and whitespace is stripped. Throws ParseError on an empty id, an
// empty body (before or after sanitization), stray data before the first
// header, invalid text, or (strict policy) a non-standard residue.
std::vector<ProteinSequence> parse_fasta(std::string_view text,
                                         SanitizePolicy policy = SanitizePolicy::skip);

std::vector<ProteinSequence> read_fasta_file(const std::string& path,
                                             SanitizePolicy policy = SanitizePolicy::skip);

std::string format_fasta(const std::vector<ProteinSequence>& seqs, std::size_t line_width = 60);

// Binary and multiclass labels. Every class other than non_pvp is a PVP.
enum class ClassKind : std::uint8_t {
    non_pvp,
    pvp,
    baseplate,
    portal,
    tail_fiber,
    major_capsid,
    minor_capsid,
    major_tail,
    minor_tail,
    others,
};

inline constexpr int kNumMulticlass = 8;

struct ClassLabel {
    ClassKind kind = ClassKind::non_pvp;

    bool is_pvp() const noexcept { return kind != ClassKind::non_pvp; }
    bool is_multiclass() const noexcept { return kind >= ClassKind::baseplate; }
    // 1 for PVP, 0 for non-PVP.
    int binary_index() const noexcept { return is_pvp() ? 1 : 0; }
    // 0..7 for the multiclass PVP kinds, -1 otherwise.
    int multiclass_index() const noexcept {
        return is_multiclass() ? static_cast<int>(kind) - static_cast<int>(ClassKind::baseplate) : -1;
    }

    friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

std::string_view label_name(ClassLabel label) noexcept;
std::optional<ClassLabel> parse_label(std::string_view name) noexcept;
ClassLabel multiclass_label(int index);

using LabelMap = std::map<std::string, ClassLabel, std::less<>>;

// Tab-separated `id<TAB>label` lines; '#' comments and blank lines ignored.
LabelMap load_manifest(std::string_view text);
LabelMap read_manifest_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace proteoknight
