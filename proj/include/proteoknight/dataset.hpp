#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proteoknight/index.hpp"
#include "proteoknight/sequence.hpp"

namespace proteoknight {

struct SplitConfig {
    std::size_t delta_pvp = 350;
    std::size_t delta_nonpvp = 275;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class LengthCategory : std::uint8_t { pvp_short, pvp_long, nonpvp_short, nonpvp_long };

inline constexpr std::array<LengthCategory, 4> kAllCategories = {
    LengthCategory::pvp_short, LengthCategory::pvp_long, LengthCategory::nonpvp_short,
    LengthCategory::nonpvp_long};

std::string_view category_name(LengthCategory c) noexcept;
std::optional<LengthCategory> parse_category(std::string_view name) noexcept;

// Threshold from the sorted unique lengths minimising |#{N <= d} - #{N > d}|,
// smallest d on ties. Throws std::invalid_argument on an empty list.
std::size_t find_equilibrium_delta(std::span<const std::size_t> lengths);

// short means N <= delta of the label's binary class.
LengthCategory categorize(std::size_t length, ClassLabel label, const SplitConfig& cfg);
inline LengthCategory categorize(const ProteinSequence& seq, ClassLabel label, const SplitConfig& cfg) {
    return categorize(seq.length(), label, cfg);
}

struct SplitResult {
    std::vector<IndexRecord> train;
    std::vector<IndexRecord> test;
    std::vector<std::string> warnings;
};

// Stratified by label string. Each class of n >= 2 records sends
// clamp(round(n * test_fraction), 1, n - 1) records to test; singleton classes
// go to train with a warning. Both outputs keep the input order.
SplitResult stratified_split(const std::vector<IndexRecord>& records, const SplitConfig& cfg);

struct CategorizedRecord {
    IndexRecord record;
    LengthCategory category;
};

// k records of `category` drawn uniformly without replacement. Throws
// DataError when fewer than k records are available.
std::vector<IndexRecord> sample_category(const std::vector<CategorizedRecord>& records,
                                         LengthCategory category, std::size_t k, std::uint64_t seed);

// Categories file: `id<TAB>category`.
std::string format_categories(const std::vector<std::pair<std::string, LengthCategory>>& rows);
std::vector<std::pair<std::string, LengthCategory>> parse_categories(std::string_view text);

}  // namespace proteoknight
