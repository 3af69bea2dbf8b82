#pragma once

// Two-class toy corpus with disjoint residue statistics: positives draw from
// the first ten residues, negatives from the last ten, so their walks use
// different directions and palettes.

#include <string>
#include <vector>

#include "proteoknight/rng.hpp"
#include "proteoknight/sequence.hpp"
#include "test_util.hpp"

namespace synthetic {

inline constexpr std::string_view kPositiveResidues = "ACDEFGHIKL";
inline constexpr std::string_view kNegativeResidues = "MNPQRSTVWY";

struct Corpus {
    std::vector<proteoknight::ProteinSequence> sequences;
    std::vector<proteoknight::ClassLabel> labels;

    std::string fasta() const { return proteoknight::format_fasta(sequences); }
    std::string manifest() const {
        std::string out;
        for (std::size_t i = 0; i < sequences.size(); ++i)
            out += sequences[i].id + "\t" + std::string(proteoknight::label_name(labels[i])) + "\n";
        return out;
    }
};

// Alternating positive/negative records with lengths uniform in [min_len, max_len].
inline Corpus make_corpus(std::size_t n, std::uint64_t seed, std::size_t min_len = 40, std::size_t max_len = 600) {
    proteoknight::Rng rng(seed);
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 0;
        const std::size_t len = min_len + rng.below(max_len - min_len + 1);
        c.sequences.push_back({(positive ? "pvp_" : "non_") + std::to_string(i),
                               testutil::random_sequence(rng, len, positive ? kPositiveResidues : kNegativeResidues),
                               0});
        c.labels.push_back({positive ? proteoknight::ClassKind::pvp : proteoknight::ClassKind::non_pvp});
    }
    return c;
}

}  // namespace synthetic
