#include "proteoknight/metrics.hpp"

#include <stdexcept>

namespace proteoknight {

namespace {
std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

std::optional<double> f1_score(double precision, double recall) {
    if (precision + recall == 0.0) return std::nullopt;
    return 2.0 * precision * recall / (precision + recall);
}

Metrics compute_metrics(const ConfusionCounts& c) {
    Metrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.specificity = ratio(c.tn, c.tn + c.fp);
    if (m.precision && m.recall) m.f1 = f1_score(*m.precision, *m.recall);
    return m;
}

ConfusionCounts confusion(std::span<const double> positive_probs, std::span<const int> labels, double threshold) {
    if (positive_probs.size() != labels.size()) throw std::invalid_argument("prediction/label count mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted = positive_probs[i] > threshold;
        const bool actual = labels[i] == 1;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ConfusionCounts confusion(const Network& model, const std::vector<Sample>& test_set, double threshold) {
    if (model.spec().classes != 2) throw std::invalid_argument("confusion counts need a binary model");
    std::vector<double> probs;
    std::vector<int> labels;
    probs.reserve(test_set.size());
    labels.reserve(test_set.size());
    for (const auto& s : test_set) {
        probs.push_back(model.predict(s.input)[1]);
        labels.push_back(s.label);
    }
    return confusion(probs, labels, threshold);
}

}  // namespace proteoknight
