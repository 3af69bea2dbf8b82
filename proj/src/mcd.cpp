#include "proteoknight/mcd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "proteoknight/error.hpp"
#include "proteoknight/rng.hpp"

namespace proteoknight {

namespace {

// Mean shifted by the first value, so a constant sample averages exactly.
double shifted_mean(std::span<const double> values) {
    const double shift = values.front();
    double sum = 0.0;
    for (double v : values) sum += v - shift;
    return shift + sum / static_cast<double>(values.size());
}

}  // namespace

void McdConfig::validate() const {
    if (passes < 2) throw std::invalid_argument("MC dropout needs at least 2 passes");
    if (samples_per_category < 1) throw std::invalid_argument("samples per category must be >= 1");
    if (dropout_rates.empty()) throw std::invalid_argument("no dropout rates given");
    for (double r : dropout_rates)
        if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("dropout rates must lie in [0, 1)");
}

std::vector<double> PredictionDistribution::positive() const {
    std::vector<double> p;
    p.reserve(passes.size());
    for (const auto& v : passes) {
        if (v.size() <= kPositiveClass) throw std::invalid_argument("distribution has no positive class column");
        p.push_back(v[kPositiveClass]);
    }
    return p;
}

std::uint64_t mcd_stream_seed(std::uint64_t seed, std::string_view id, double rate) {
    return derive_seed(seed, id, std::bit_cast<std::uint64_t>(rate));
}

PredictionDistribution mc_predict(const Network& model, const Tensor& input, int passes, double rate,
                                  std::uint64_t seed) {
    if (passes < 2) throw std::invalid_argument("MC dropout needs at least 2 passes");
    if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("dropout rate must lie in [0, 1)");
    const auto hidden = model.features(input);
    Rng rng(seed);
    PredictionDistribution d;
    d.dropout_rate = rate;
    d.passes.reserve(static_cast<std::size_t>(passes));
    for (int t = 0; t < passes; ++t) {
        const auto mask = DropoutMask::sample(hidden.size(), rate, rng);
        d.passes.push_back(model.head(hidden, &mask));
    }
    return d;
}

std::vector<double> expectation(const PredictionDistribution& dist) {
    if (dist.passes.empty()) throw std::invalid_argument("empty distribution");
    const auto& first = dist.passes.front();
    std::vector<double> mean(first.size(), 0.0);
    for (const auto& v : dist.passes) {
        if (v.size() != mean.size()) throw std::invalid_argument("ragged distribution");
        for (std::size_t c = 0; c < v.size(); ++c) mean[c] += v[c] - first[c];
    }
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] = first[c] + mean[c] / static_cast<double>(dist.passes.size());
    return mean;
}

double variance(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("variance of an empty sample");
    // Shifted by the first value: a constant sample is exactly zero.
    const double shift = values.front();
    double mean = 0.0;
    for (double v : values) mean += v - shift;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - shift - mean) * (v - shift - mean);
    return ss / static_cast<double>(values.size());
}

double variance_moment_form(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("variance of an empty sample");
    double s = 0.0, s2 = 0.0;
    for (double v : values) {
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(values.size());
    const double mean = s / n;
    return s2 / n - mean * mean;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0, 1]");
    auto term = [](double q) { return q > 0.0 ? q * std::log2(1.0 / q) : 0.0; };
    return term(p) + term(1.0 - p);
}

std::vector<std::size_t> histogram(std::span<const double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("histogram value outside [0, 1]");
        auto b = static_cast<std::size_t>(v * bins);
        counts[std::min(b, counts.size() - 1)]++;
    }
    return counts;
}

SampleSummary summarize_sample(const PredictionDistribution& dist) {
    const auto p = dist.positive();
    if (p.empty()) throw std::invalid_argument("empty distribution");
    SampleSummary s;
    s.id = dist.id;
    std::vector<double> h;
    h.reserve(p.size());
    for (double v : p) h.push_back(binary_entropy(v));
    s.mean_p = expectation(dist)[kPositiveClass];
    s.variance = variance(p);
    s.entropy_of_mean = binary_entropy(std::clamp(s.mean_p, 0.0, 1.0));
    s.entropy_mean_of_passes = shifted_mean(h);
    return s;
}

UncertaintyReport summarize(const std::vector<PredictionDistribution>& dists) {
    using Key = std::pair<LengthCategory, double>;
    std::map<Key, std::vector<SampleSummary>> groups;
    for (const auto& d : dists) groups[{d.category, d.dropout_rate}].push_back(summarize_sample(d));

    UncertaintyReport report;
    for (const auto& [key, samples] : groups) {
        CategoryStats row{key.first, key.second, 0.0, 0.0, 0.0, 0.0, samples.size()};
        const SampleSummary* hi = &samples.front();
        const SampleSummary* lo = &samples.front();
        for (const auto& s : samples) {
            row.mean_p += s.mean_p;
            row.variance += s.variance;
            row.entropy_mean_of_passes += s.entropy_mean_of_passes;
            row.entropy_of_mean += s.entropy_of_mean;
            if (s.variance > hi->variance) hi = &s;
            if (s.variance < lo->variance) lo = &s;
        }
        const double n = static_cast<double>(samples.size());
        row.mean_p /= n;
        row.variance /= n;
        row.entropy_mean_of_passes /= n;
        row.entropy_of_mean /= n;
        report.rows.push_back(row);
        report.extremes.push_back({key.first, key.second, *hi, *lo});
    }
    return report;
}

UncertaintyReport run_category_analysis(const Network& model, const std::vector<CategorizedRecord>& records,
                                        const InputLoader& load, const McdConfig& cfg,
                                        std::vector<PredictionDistribution>* dump) {
    cfg.validate();
    if (model.spec().classes != 2) throw std::invalid_argument("uncertainty analysis needs a binary model");

    std::vector<double> rates = cfg.dropout_rates;
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    std::vector<PredictionDistribution> all;
    for (LengthCategory cat : kAllCategories) {
        const auto chosen = sample_category(records, cat, cfg.samples_per_category, cfg.seed);
        for (const auto& rec : chosen) {
            const Tensor input = load(rec);
            for (double rate : rates) {
                auto d = mc_predict(model, input, cfg.passes, rate, mcd_stream_seed(cfg.seed, rec.id, rate));
                d.id = rec.id;
                d.category = cat;
                all.push_back(std::move(d));
            }
        }
    }
    auto report = summarize(all);
    if (dump) dump->insert(dump->end(), std::make_move_iterator(all.begin()), std::make_move_iterator(all.end()));
    return report;
}

std::string format_predictions(const std::vector<PredictionDistribution>& dists) {
    std::string out;
    for (const auto& d : dists) {
        for (std::size_t t = 0; t < d.passes.size(); ++t) {
            nlohmann::ordered_json rec;
            rec["id"] = d.id;
            rec["category"] = category_name(d.category);
            rec["dropout_rate"] = d.dropout_rate;
            rec["pass_index"] = t;
            rec["probs"] = d.passes[t];
            out += rec.dump();
            out += '\n';
        }
    }
    return out;
}

std::vector<PredictionDistribution> parse_predictions(std::string_view text) {
    std::vector<PredictionDistribution> out;
    std::size_t line_no = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        auto fail = [&](const std::string& why) {
            return DataError("predictions line " + std::to_string(line_no) + ": " + why);
        };
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
            const auto id = rec.at("id").get<std::string>();
            const auto cat_name = rec.at("category").get<std::string>();
            const auto rate = rec.at("dropout_rate").get<double>();
            const auto pass = rec.at("pass_index").get<std::int64_t>();
            auto probs = rec.at("probs").get<std::vector<double>>();

            const auto cat = parse_category(cat_name);
            if (!cat) throw fail("unknown category '" + cat_name + "'");
            if (!(rate >= 0.0 && rate < 1.0)) throw fail("dropout_rate outside [0, 1)");
            if (probs.size() < 2) throw fail("probs needs at least 2 entries");
            double sum = 0.0;
            for (double p : probs) {
                if (!(p >= 0.0 && p <= 1.0)) throw fail("probability outside [0, 1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-6) throw fail("probs do not sum to 1");

            if (pass == 0) {
                out.push_back(PredictionDistribution{id, *cat, rate, {}});
            } else {
                if (out.empty()) throw fail("pass_index " + std::to_string(pass) + " without a pass 0");
                const auto& cur = out.back();
                if (cur.id != id || cur.category != *cat || cur.dropout_rate != rate ||
                    static_cast<std::int64_t>(cur.passes.size()) != pass)
                    throw fail("pass_index " + std::to_string(pass) + " does not continue the preceding record");
                if (cur.passes.front().size() != probs.size()) throw fail("probs width changed within a record");
            }
            out.back().passes.push_back(std::move(probs));
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        }
    }
    for (const auto& d : out)
        if (d.passes.size() < 2) throw DataError("predictions for '" + d.id + "' have fewer than 2 passes");
    return out;
}

std::string format_report_csv(const UncertaintyReport& report) {
    std::string out = "category,dropout_rate,mean_P,variance,entropy_mean_of_passes,entropy_of_mean,n\n";
    for (const auto& r : report.rows) {
        out += std::string(category_name(r.category)) + "," + format_double(r.dropout_rate) + "," +
               format_double(r.mean_p) + "," + format_double(r.variance) + "," +
               format_double(r.entropy_mean_of_passes) + "," + format_double(r.entropy_of_mean) + "," +
               std::to_string(r.n) + "\n";
    }
    return out;
}

std::string format_extremes_csv(const UncertaintyReport& report) {
    std::string out = "category,dropout_rate,rank,id,mean_P,variance,entropy_of_mean,entropy_mean_of_passes\n";
    auto row = [&](const CategoryExtremes& e, std::string_view rank, const SampleSummary& s) {
        out += std::string(category_name(e.category)) + "," + format_double(e.dropout_rate) + "," +
               std::string(rank) + "," + s.id + "," + format_double(s.mean_p) + "," + format_double(s.variance) +
               "," + format_double(s.entropy_of_mean) + "," + format_double(s.entropy_mean_of_passes) + "\n";
    };
    for (const auto& e : report.extremes) {
        row(e, "high_variance", e.highest_variance);
        row(e, "low_variance", e.lowest_variance);
    }
    return out;
}

std::string format_histogram_csv(std::span<const std::size_t> counts) {
    std::string out = "bin_low,bin_high,count\n";
    const double n = static_cast<double>(counts.size());
    for (std::size_t b = 0; b < counts.size(); ++b)
        out += format_double(static_cast<double>(b) / n) + "," + format_double(static_cast<double>(b + 1) / n) +
               "," + std::to_string(counts[b]) + "\n";
    return out;
}

}  // namespace proteoknight
