#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proteoknight/network.hpp"

namespace proteoknight {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// nullopt marks a ratio whose denominator is zero.
struct Metrics {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> specificity;
    std::optional<double> f1;
};

Metrics compute_metrics(const ConfusionCounts& c);

// Harmonic mean of precision and recall; nullopt when both are zero.
std::optional<double> f1_score(double precision, double recall);

// Predicted positive iff positive_prob > threshold; labels are 1 (positive) or 0.
ConfusionCounts confusion(std::span<const double> positive_probs, std::span<const int> labels,
                          double threshold = 0.5);
// Binary model with dropout off; class 1 is the positive (PVP) class.
ConfusionCounts confusion(const Network& model, const std::vector<Sample>& test_set, double threshold = 0.5);

}  // namespace proteoknight
