#include "proteoknight/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "proteoknight/error.hpp"
#include "proteoknight/rng.hpp"

namespace proteoknight {

void SplitConfig::validate() const {
    if (delta_pvp == 0 || delta_nonpvp == 0) throw std::invalid_argument("length thresholds must be positive");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test fraction must lie in (0, 1)");
}

namespace {
constexpr std::array<std::string_view, 4> kCategoryNames = {"PVP-short", "PVP-long", "nonPVP-short",
                                                            "nonPVP-long"};
}

std::string_view category_name(LengthCategory c) noexcept { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<LengthCategory> parse_category(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
        if (kCategoryNames[i] == name) return static_cast<LengthCategory>(i);
    return std::nullopt;
}

std::size_t find_equilibrium_delta(std::span<const std::size_t> lengths) {
    if (lengths.empty()) throw std::invalid_argument("cannot pick a threshold for an empty length list");
    std::vector<std::size_t> sorted(lengths.begin(), lengths.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<long long>(sorted.size());

    std::size_t best = sorted.front();
    long long best_gap = -1;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        // j values are <= sorted[i]
        const long long at_most = static_cast<long long>(j);
        const long long gap = std::llabs(at_most - (n - at_most));
        if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            best = sorted[i];
        }
        i = j;
    }
    return best;
}

LengthCategory categorize(std::size_t length, ClassLabel label, const SplitConfig& cfg) {
    if (label.is_pvp()) return length <= cfg.delta_pvp ? LengthCategory::pvp_short : LengthCategory::pvp_long;
    return length <= cfg.delta_nonpvp ? LengthCategory::nonpvp_short : LengthCategory::nonpvp_long;
}

SplitResult stratified_split(const std::vector<IndexRecord>& records, const SplitConfig& cfg) {
    cfg.validate();
    // Class members in input order, classes in order of first appearance.
    std::vector<std::string> class_order;
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto [it, inserted] = members.try_emplace(records[i].label);
        if (inserted) class_order.push_back(records[i].label);
        it->second.push_back(i);
    }

    SplitResult out;
    std::vector<bool> in_test(records.size(), false);
    for (const auto& label : class_order) {
        auto& idx = members[label];
        const std::size_t n = idx.size();
        if (n < 2) {
            out.warnings.push_back("class '" + label + "' has " + std::to_string(n) +
                                   " record(s); cannot stratify, kept in train");
            continue;
        }
        const auto wanted = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.test_fraction));
        const std::size_t n_test = std::clamp<std::size_t>(wanted, 1, n - 1);
        Rng rng(derive_seed(cfg.seed, label, 0x5b1));
        // Partial Fisher-Yates: the first n_test slots become the test draw.
        for (std::size_t i = 0; i < n_test; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(idx[i], idx[j]);
        }
        for (std::size_t i = 0; i < n_test; ++i) in_test[idx[i]] = true;
    }
    for (std::size_t i = 0; i < records.size(); ++i) (in_test[i] ? out.test : out.train).push_back(records[i]);
    return out;
}

std::vector<IndexRecord> sample_category(const std::vector<CategorizedRecord>& records,
                                         LengthCategory category, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].category == category) pool.push_back(i);
    if (pool.size() < k)
        throw DataError("category " + std::string(category_name(category)) + " has " +
                        std::to_string(pool.size()) + " records, " + std::to_string(k) + " requested");
    Rng rng(derive_seed(seed, category_name(category), 0x5a3));
    std::vector<IndexRecord> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        out.push_back(records[pool[i]].record);
    }
    return out;
}

std::string format_categories(const std::vector<std::pair<std::string, LengthCategory>>& rows) {
    std::string out;
    for (const auto& [id, cat] : rows) {
        out += id;
        out += '\t';
        out += category_name(cat);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, LengthCategory>> parse_categories(std::string_view text) {
    std::vector<std::pair<std::string, LengthCategory>> out;
    for (const auto& f : split_tsv(text)) {
        if (f.size() != 2) throw DataError("categories row is not `id<TAB>category`");
        const auto cat = parse_category(f[1]);
        if (!cat) throw DataError("unknown category '" + std::string(f[1]) + "'");
        out.emplace_back(std::string(f[0]), *cat);
    }
    return out;
}

}  // namespace proteoknight
