#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proteoknight/image.hpp"
#include "proteoknight/index.hpp"
#include "proteoknight/sequence.hpp"

namespace proteoknight {

// Per-residue walk angle (index * 18 degrees) and stamp color.
class AngleColorTable {
public:
    // The standard icosagon palette.
    AngleColorTable();
    // Same angles, caller-supplied colors (indexed like kResidues).
    explicit AngleColorTable(const std::array<Rgb, 20>& colors);

    double angle_degrees(char residue) const { return 18.0 * checked_index(residue); }
    double angle_radians(char residue) const { return radians_[checked_index(residue)]; }
    Rgb color(char residue) const { return colors_[checked_index(residue)]; }
    const std::array<Rgb, 20>& colors() const noexcept { return colors_; }

private:
    static std::size_t checked_index(char residue);

    std::array<double, 20> radians_{};
    std::array<Rgb, 20> colors_{};
};

const AngleColorTable& standard_table();

struct EncodingConfig {
    int size = 512;       // image side M
    double radius = 15.0;  // walk step r
    int point_size = 2;   // stamped disk radius

    // Throws std::invalid_argument unless r > 0, point_size >= 1 and M >= 2r + 2*point_size.
    void validate() const;
};

struct Displacement {
    double dx;
    double dy;
};

// (r cos theta, r sin theta) for the residue's angle. Throws
// std::invalid_argument for a residue outside the 20-letter alphabet.
Displacement displacement(char residue, const AngleColorTable& table, double radius);

struct WalkStep {
    double x;      // position after the move, continuous
    double y;
    bool reset_x;  // the loop-top guard recentred x before this move
    bool reset_y;
    int cx;        // rounded stamp center
    int cy;
    bool stamped;  // false when the center lies outside [0, M)^2
};

// One step per residue: recentre any coordinate outside [0, M], move by
// (+dx, -dy), then stamp at the rounded position.
std::vector<WalkStep> trace_walk(std::string_view residues, const EncodingConfig& cfg,
                                 const AngleColorTable& table = standard_table());

// Renders the walk into an M x M RGB image on a black background.
Image encode(std::string_view residues, const EncodingConfig& cfg,
             const AngleColorTable& table = standard_table());

inline Image encode(const ProteinSequence& seq, const EncodingConfig& cfg,
                    const AngleColorTable& table = standard_table()) {
    return encode(seq.residues, cfg, table);
}

struct CorpusOptions {
    unsigned jobs = 1;
    bool strict = false;  // first failure aborts the batch
};

struct CorpusResult {
    std::vector<IndexRecord> index;              // in input order, successful records only
    std::vector<std::string> failures;           // one message per failed record
};

// Writes `<id>.png` for every sequence into out_dir and returns the index
// rows. `labels` supplies the third index column ("unknown" when absent).
// Output is byte-identical regardless of `jobs`. Throws DataError when the
// directory cannot be created/written, or on the first failure in strict mode.
CorpusResult encode_corpus(const std::vector<ProteinSequence>& seqs, const LabelMap& labels,
                           const EncodingConfig& cfg, const std::filesystem::path& out_dir,
                           const CorpusOptions& options = {},
                           const AngleColorTable& table = standard_table());

}  // namespace proteoknight
