#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proteoknight/dataset.hpp"
#include "proteoknight/network.hpp"

namespace proteoknight {

struct McdConfig {
    int passes = 100;  // T
    std::vector<double> dropout_rates = {0.1, 0.2, 0.3};
    std::size_t samples_per_category = 100;
    std::uint64_t seed = 0;

    // T >= 2, k >= 1, every rate in [0, 1). Rate 0 is accepted as the
    // dropout-disabled control.
    void validate() const;
};

// T softmax vectors for one input. In binary mode P_t = passes[t][1] (PVP).
struct PredictionDistribution {
    std::string id;
    LengthCategory category = LengthCategory::pvp_short;
    double dropout_rate = 0.0;
    std::vector<std::vector<double>> passes;

    std::vector<double> positive() const;
};

inline constexpr std::size_t kPositiveClass = 1;

// T passes, each with a fresh mask from an Rng seeded by `seed`. The
// deterministic trunk is evaluated once and only the head is resampled.
PredictionDistribution mc_predict(const Network& model, const Tensor& input, int passes, double rate,
                                  std::uint64_t seed);

// Stream seed for one (run seed, sample id, rate) triple.
std::uint64_t mcd_stream_seed(std::uint64_t seed, std::string_view id, double rate);

// Mean probability vector over passes.
std::vector<double> expectation(const PredictionDistribution& dist);

// Population variance (divide by T), two-pass form.
double variance(std::span<const double> values);
// Same quantity via E[P^2] - E[P]^2.
double variance_moment_form(std::span<const double> values);
inline double variance(const PredictionDistribution& dist) { return variance(dist.positive()); }

// Binary entropy in bits with 0 log(1/0) = 0. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

// Equal-width bins over [0, 1]; 1.0 lands in the last bin. Throws on
// bins < 2 or values outside [0, 1].
std::vector<std::size_t> histogram(std::span<const double> values, int bins);

struct CategoryStats {
    LengthCategory category;
    double dropout_rate;
    double mean_p;                  // mean over samples of the mean P
    double variance;                // mean over samples of Var(P)
    double entropy_mean_of_passes;  // mean over samples of mean_t H(P_t)
    double entropy_of_mean;         // mean over samples of H(mean P)
    std::size_t n;
};

struct SampleSummary {
    std::string id;
    double mean_p;
    double variance;
    double entropy_of_mean;
    double entropy_mean_of_passes;
};

SampleSummary summarize_sample(const PredictionDistribution& dist);

struct CategoryExtremes {
    LengthCategory category;
    double dropout_rate;
    SampleSummary highest_variance;
    SampleSummary lowest_variance;
};

struct UncertaintyReport {
    std::vector<CategoryStats> rows;          // category order, then ascending rate
    std::vector<CategoryExtremes> extremes;   // same order
};

// Aggregates distributions by (category, rate). Ties for the extremes go to
// the first sample in input order.
UncertaintyReport summarize(const std::vector<PredictionDistribution>& dists);

using InputLoader = std::function<Tensor(const IndexRecord&)>;

// Samples k records per category, runs mc_predict for every configured rate
// and summarises. Distributions are appended to `dump` when non-null.
// Throws DataError when a category has fewer than k records.
UncertaintyReport run_category_analysis(const Network& model, const std::vector<CategorizedRecord>& records,
                                        const InputLoader& load, const McdConfig& cfg,
                                        std::vector<PredictionDistribution>* dump = nullptr);

// Predictions file: one JSON object per line,
// {"id", "category", "dropout_rate", "pass_index", "probs": [...]}.
std::string format_predictions(const std::vector<PredictionDistribution>& dists);
// Groups consecutive pass records back into distributions. Throws DataError
// on malformed lines, non-normalised probability vectors, or pass indices
// that are not 0..T-1 in order.
std::vector<PredictionDistribution> parse_predictions(std::string_view text);

std::string format_report_csv(const UncertaintyReport& report);
std::string format_extremes_csv(const UncertaintyReport& report);
std::string format_histogram_csv(std::span<const std::size_t> counts);

}  // namespace proteoknight
