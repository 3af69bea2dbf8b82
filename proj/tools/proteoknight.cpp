// proteoknight: encode protein sequences as walk images, train a small
// dropout classifier on them and analyse Monte Carlo dropout uncertainty.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proteoknight/dataset.hpp"
#include "proteoknight/encoder.hpp"
#include "proteoknight/error.hpp"
#include "proteoknight/index.hpp"
#include "proteoknight/mcd.hpp"
#include "proteoknight/metrics.hpp"
#include "proteoknight/network.hpp"
#include "proteoknight/pipeline_config.hpp"
#include "proteoknight/sequence.hpp"

namespace fs = std::filesystem;
using namespace proteoknight;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }
void info(const std::string& msg) { std::cerr << msg << "\n"; }

// --config is read before the other flags so that flags override it.
std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return std::nullopt;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const PipelineConfig& cfg) {
    if (flag) return *flag;
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("PROTEOKNIGHT_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw DataError(std::string("PROTEOKNIGHT_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

struct LoadedSamples {
    std::vector<Sample> samples;
    std::vector<IndexRecord> records;  // parallel to samples
};

// Maps index labels to class indices for the task; rows without a usable
// label are skipped with a warning.
LoadedSamples load_samples(const std::vector<IndexRecord>& rows, Task task, int input_size) {
    LoadedSamples out;
    std::size_t skipped = 0;
    for (const auto& r : rows) {
        const auto label = parse_label(r.label);
        int cls = -1;
        if (label) cls = task == Task::binary ? label->binary_index() : label->multiclass_index();
        if (cls < 0) {
            ++skipped;
            continue;
        }
        out.samples.push_back({image_to_input(read_png(r.path), input_size), cls});
        out.records.push_back(r);
    }
    if (skipped)
        warn(std::to_string(skipped) + " record(s) without a " + std::string(task_name(task)) +
             " label were skipped");
    return out;
}

std::string metric_text(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw DataError("cannot create directory '" + dir.string() + "'");
}

// ---- encode ---------------------------------------------------------------

struct EncodeArgs {
    std::string fasta, manifest, out_dir, index;
    unsigned jobs = 1;
    bool strict = false;
};

int run_encode(const EncodeArgs& a, const PipelineConfig& cfg) {
    const auto policy = a.strict ? SanitizePolicy::strict : SanitizePolicy::skip;
    const auto seqs = read_fasta_file(a.fasta, policy);
    for (const auto& s : seqs)
        if (s.skipped) warn(s.id + ": skipped " + std::to_string(s.skipped) + " non-standard residue(s)");

    LabelMap labels;
    if (!a.manifest.empty()) labels = read_manifest_file(a.manifest);
    for (const auto& s : seqs) {
        if (labels.count(s.id)) continue;
        if (a.strict) throw DataError("sequence '" + s.id + "' has no manifest label");
        if (!a.manifest.empty()) warn("sequence '" + s.id + "' has no manifest label; recorded as unknown");
    }

    const auto result = encode_corpus(seqs, labels, cfg.encoding, a.out_dir, {a.jobs, a.strict});
    for (const auto& f : result.failures) warn("failed: " + f);
    const std::string index_path = a.index.empty() ? (fs::path(a.out_dir) / "index.tsv").string() : a.index;
    write_text_file(index_path, format_index(result.index));
    info("encoded " + std::to_string(result.index.size()) + " sequence(s) into " + a.out_dir + "; index " +
         index_path);
    return result.failures.empty() ? kOk : kData;
}

// ---- split ----------------------------------------------------------------

struct SplitArgs {
    std::string index, fasta, out_dir;
    bool auto_delta = false;
    std::optional<std::uint64_t> seed;
};

int run_split(const SplitArgs& a, PipelineConfig cfg) {
    cfg.split.seed = resolve_seed(a.seed, cfg);
    cfg.split.validate();
    const auto rows = read_index_file(a.index);
    std::map<std::string, std::size_t, std::less<>> lengths;
    for (const auto& s : read_fasta_file(a.fasta)) lengths[s.id] = s.length();

    std::vector<IndexRecord> labelled;
    std::vector<ClassLabel> labels;
    std::size_t unlabelled = 0;
    for (const auto& r : rows) {
        const auto l = parse_label(r.label);
        if (!l) {
            ++unlabelled;
            continue;
        }
        if (!lengths.count(r.id)) throw DataError("index id '" + r.id + "' is missing from " + a.fasta);
        labelled.push_back(r);
        labels.push_back(*l);
    }
    if (unlabelled) warn(std::to_string(unlabelled) + " unlabelled record(s) left out of the split");

    if (a.auto_delta) {
        std::vector<std::size_t> pvp, non;
        for (std::size_t i = 0; i < labelled.size(); ++i)
            (labels[i].is_pvp() ? pvp : non).push_back(lengths[labelled[i].id]);
        if (!pvp.empty()) cfg.split.delta_pvp = find_equilibrium_delta(pvp);
        if (!non.empty()) cfg.split.delta_nonpvp = find_equilibrium_delta(non);
    }
    info("length thresholds: PVP " + std::to_string(cfg.split.delta_pvp) + ", non-PVP " +
         std::to_string(cfg.split.delta_nonpvp));

    const auto split = stratified_split(labelled, cfg.split);
    for (const auto& w : split.warnings) warn(w);

    std::vector<std::pair<std::string, LengthCategory>> cats;
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < labelled.size(); ++i) {
        const auto c = categorize(lengths[labelled[i].id], labels[i], cfg.split);
        cats.emplace_back(labelled[i].id, c);
        ++counts[static_cast<std::size_t>(c)];
    }

    const fs::path out(a.out_dir);
    ensure_dir(out);
    write_text_file((out / "train.tsv").string(), format_index(split.train));
    write_text_file((out / "test.tsv").string(), format_index(split.test));
    write_text_file((out / "categories.tsv").string(), format_categories(cats));
    std::cout << "train\t" << split.train.size() << "\ntest\t" << split.test.size() << "\n";
    for (auto c : kAllCategories)
        std::cout << category_name(c) << "\t" << counts[static_cast<std::size_t>(c)] << "\n";
    return kOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string train, model, task = "binary";
    std::optional<std::uint64_t> seed;
};

int run_train(const TrainArgs& a, PipelineConfig cfg) {
    cfg.train.seed = resolve_seed(a.seed, cfg);
    cfg.network.task = a.task == "multiclass" ? Task::multiclass : Task::binary;
    cfg.network.classes = cfg.network.task == Task::binary ? 2 : kNumMulticlass;
    cfg.network.validate();
    cfg.train.validate();

    const auto data = load_samples(read_index_file(a.train), cfg.network.task, cfg.network.input_size);
    if (data.samples.empty()) throw DataError("no usable training records in " + a.train);

    Network net(cfg.network, derive_seed(cfg.train.seed, "init"));
    info("training on " + std::to_string(data.samples.size()) + " image(s), " +
         std::to_string(net.parameter_count()) + " parameters");
    const auto report = train(net, data.samples, cfg.train);
    for (std::size_t e = 0; e < report.loss_history.size(); ++e)
        std::cout << "epoch\t" << e << "\tloss\t" << format_double(report.loss_history[e]) << "\n";
    std::cout << "train_accuracy\t" << metric_text(report.train_accuracy) << "\n";
    net.save(a.model);
    return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string model, test, metrics_csv;
    double threshold = 0.5;
};

int run_eval(const EvalArgs& a) {
    const Network net = Network::load(a.model);
    const auto data = load_samples(read_index_file(a.test), net.spec().task, net.spec().input_size);
    if (data.samples.empty()) throw DataError("no usable test records in " + a.test);

    std::vector<std::pair<std::string, std::optional<double>>> rows;
    if (net.spec().task == Task::binary) {
        const auto c = confusion(net, data.samples, a.threshold);
        const auto m = compute_metrics(c);
        std::cout << "TP\t" << c.tp << "\nTN\t" << c.tn << "\nFP\t" << c.fp << "\nFN\t" << c.fn << "\n";
        rows = {{"accuracy", m.accuracy},
                {"precision", m.precision},
                {"recall", m.recall},
                {"specificity", m.specificity},
                {"f1", m.f1}};
    } else {
        rows = {{"accuracy", dataset_accuracy(net, data.samples)}};
    }
    std::string csv = "metric,value\n";
    for (const auto& [name, v] : rows) {
        std::cout << name << "\t" << metric_text(v) << "\n";
        csv += name + "," + (v ? format_double(*v) : "undefined") + "\n";
    }
    if (!a.metrics_csv.empty()) write_text_file(a.metrics_csv, csv);
    return kOk;
}

// ---- predict --------------------------------------------------------------

struct PredictArgs {
    std::string model, index, out;
};

int run_predict(const PredictArgs& a) {
    const Network net = Network::load(a.model);
    const auto rows = read_index_file(a.index);
    std::string out = "id\tlabel\tpredicted";
    for (int c = 0; c < net.spec().classes; ++c) out += "\tprob_" + std::to_string(c);
    out += "\n";
    for (const auto& r : rows) {
        const auto p = net.predict(image_to_input(read_png(r.path), net.spec().input_size));
        const auto best = std::max_element(p.begin(), p.end()) - p.begin();
        std::string predicted = std::to_string(best);
        if (net.spec().task == Task::binary) predicted = best == 1 ? "PVP" : "non-PVP";
        else predicted = std::string(label_name(multiclass_label(static_cast<int>(best))));
        out += r.id + "\t" + r.label + "\t" + predicted;
        for (double v : p) out += "\t" + format_double(v);
        out += "\n";
    }
    if (a.out.empty()) std::cout << out;
    else write_text_file(a.out, out);
    return kOk;
}

// ---- mcd / report -----------------------------------------------------------

void write_report_files(const UncertaintyReport& report, const std::vector<PredictionDistribution>& dists,
                        const fs::path& out, int bins) {
    write_text_file((out / "report.csv").string(), format_report_csv(report));
    write_text_file((out / "report_extremes.csv").string(), format_extremes_csv(report));
    if (bins <= 0) return;
    std::map<std::pair<LengthCategory, double>, std::vector<double>> pooled;
    for (const auto& d : dists) {
        auto& v = pooled[{d.category, d.dropout_rate}];
        for (double p : d.positive()) v.push_back(p);
    }
    const fs::path hist = out / "histograms";
    ensure_dir(hist);
    for (const auto& [key, values] : pooled) {
        const auto name = "hist_" + std::string(category_name(key.first)) + "_" + format_double(key.second) + ".csv";
        write_text_file((hist / name).string(), format_histogram_csv(histogram(values, bins)));
    }
}

struct McdArgs {
    std::string model, index, categories, out_dir;
    int bins = 10;
    std::optional<std::uint64_t> seed;
};

int run_mcd(const McdArgs& a, PipelineConfig cfg) {
    cfg.mcd.seed = resolve_seed(a.seed, cfg);
    cfg.mcd.validate();
    const Network net = Network::load(a.model);
    if (net.spec().task != Task::binary) throw DataError("uncertainty analysis needs a binary model");

    std::map<std::string, LengthCategory, std::less<>> cat_of;
    for (const auto& [id, c] : parse_categories(read_file(a.categories))) cat_of[id] = c;
    std::vector<CategorizedRecord> recs;
    for (const auto& r : read_index_file(a.index)) {
        const auto it = cat_of.find(r.id);
        if (it == cat_of.end()) {
            warn("'" + r.id + "' has no category; skipped");
            continue;
        }
        recs.push_back({r, it->second});
    }

    const int side = net.spec().input_size;
    const InputLoader load = [side](const IndexRecord& r) { return image_to_input(read_png(r.path), side); };
    std::vector<PredictionDistribution> dump;
    const auto report = run_category_analysis(net, recs, load, cfg.mcd, &dump);

    const fs::path out(a.out_dir);
    ensure_dir(out);
    write_text_file((out / "predictions.jsonl").string(), format_predictions(dump));
    write_report_files(report, dump, out, a.bins);
    std::cout << format_report_csv(report);
    return kOk;
}

struct ReportArgs {
    std::string predictions, out_dir;
    int bins = 10;
};

int run_report(const ReportArgs& a) {
    const auto dists = parse_predictions(read_file(a.predictions));
    if (dists.empty()) throw DataError(a.predictions + " holds no predictions");
    const auto report = summarize(dists);
    const fs::path out(a.out_dir);
    ensure_dir(out);
    write_report_files(report, dists, out, a.bins);
    std::cout << format_report_csv(report);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    PipelineConfig cfg;
    try {
        if (const auto path = find_config_arg(argc, argv)) cfg = read_pipeline_config(*path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"Walk-image encoding, dropout classification and MC dropout uncertainty for protein sequences"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    std::string config_path;
    app.add_option("--config", config_path, "Flat key = value config file; flags override it")
        ->check(CLI::ExistingFile);

    auto add_seed = [](CLI::App* sub, std::optional<std::uint64_t>& seed) {
        sub->add_option("--seed", seed, "Random seed (falls back to the config file, then PROTEOKNIGHT_SEED)");
    };
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Flat key = value config file; flags override it")
            ->check(CLI::ExistingFile);
    };

    EncodeArgs enc;
    auto* encode_cmd = app.add_subcommand("encode", "Render every FASTA record as a PNG and write an index TSV");
    add_config(encode_cmd);
    encode_cmd->add_option("--fasta", enc.fasta, "Input FASTA")->required();
    encode_cmd->add_option("--manifest", enc.manifest, "Label manifest (id<TAB>label)");
    encode_cmd->add_option("--out-dir", enc.out_dir, "Directory for <id>.png files")->required();
    encode_cmd->add_option("--index", enc.index, "Index TSV path (default <out-dir>/index.tsv)");
    encode_cmd->add_option("--size", cfg.encoding.size, "Image side in pixels")->capture_default_str();
    encode_cmd->add_option("--radius", cfg.encoding.radius, "Walk step in pixels")->capture_default_str();
    encode_cmd->add_option("--point-size", cfg.encoding.point_size, "Stamped disk radius in pixels")
        ->capture_default_str();
    encode_cmd->add_option("--jobs", enc.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    encode_cmd->add_flag("--strict", enc.strict,
                         "Reject non-standard residues and unlabelled ids; stop on the first write failure");

    SplitArgs spl;
    auto* split_cmd = app.add_subcommand("split", "Stratified train/test split and length categories");
    add_config(split_cmd);
    split_cmd->add_option("--index", spl.index, "Encoder index TSV")->required();
    split_cmd->add_option("--fasta", spl.fasta, "FASTA the index was built from (for lengths)")
        ->required();
    split_cmd->add_option("--out-dir", spl.out_dir, "Writes train.tsv, test.tsv, categories.tsv")->required();
    split_cmd->add_option("--test-fraction", cfg.split.test_fraction, "Test share per class")->capture_default_str();
    split_cmd->add_option("--delta-pvp", cfg.split.delta_pvp, "PVP short/long length threshold")
        ->capture_default_str();
    split_cmd->add_option("--delta-nonpvp", cfg.split.delta_nonpvp, "non-PVP short/long length threshold")
        ->capture_default_str();
    split_cmd->add_flag("--auto-delta", spl.auto_delta, "Pick each class threshold that balances short and long");
    add_seed(split_cmd, spl.seed);

    TrainArgs trn;
    auto* train_cmd = app.add_subcommand("train", "Train the built-in dropout classifier");
    add_config(train_cmd);
    train_cmd->add_option("--train", trn.train, "Training TSV (id<TAB>path<TAB>label)")
        ->required();
    train_cmd->add_option("--model", trn.model, "Output checkpoint path")->required();
    train_cmd->add_option("--task", trn.task, "binary or multiclass")
        ->capture_default_str()
        ->check(CLI::IsMember({"binary", "multiclass"}));
    train_cmd->add_option("--epochs", cfg.train.epochs, "Training epochs")->capture_default_str();
    train_cmd->add_option("--batch-size", cfg.train.batch_size, "Mini-batch size")->capture_default_str();
    train_cmd->add_option("--learning-rate", cfg.train.learning_rate, "Step size")->capture_default_str();
    train_cmd->add_option("--dropout", cfg.train.dropout, "Training dropout rate")->capture_default_str();
    std::string optimizer = cfg.train.optimizer == TrainConfig::Optimizer::adam ? "adam" : "sgd";
    train_cmd->add_option("--optimizer", optimizer, "Optimizer")
        ->capture_default_str()
        ->check(CLI::IsMember({"sgd", "adam"}));
    train_cmd->add_option("--input-size", cfg.network.input_size, "Network input side (images are area-averaged)")
        ->capture_default_str();
    train_cmd->add_option("--conv-channels", cfg.network.conv_channels, "Channels per conv block")
        ->delimiter(',')
        ->capture_default_str();
    train_cmd->add_option("--hidden", cfg.network.hidden, "Hidden dense units")->capture_default_str();
    add_seed(train_cmd, trn.seed);

    EvalArgs evl;
    auto* eval_cmd = app.add_subcommand("eval", "Confusion counts and metrics on a labelled TSV");
    add_config(eval_cmd);
    eval_cmd->add_option("--model", evl.model, "Checkpoint")->required();
    eval_cmd->add_option("--test", evl.test, "Test TSV")->required();
    eval_cmd->add_option("--threshold", evl.threshold, "Positive decision threshold on P(PVP)")
        ->capture_default_str();
    eval_cmd->add_option("--metrics-csv", evl.metrics_csv, "Also write metric,value CSV here");

    PredictArgs prd;
    auto* predict_cmd = app.add_subcommand("predict", "Deterministic class probabilities for every indexed image");
    add_config(predict_cmd);
    predict_cmd->add_option("--model", prd.model, "Checkpoint")->required();
    predict_cmd->add_option("--index", prd.index, "Index TSV")->required();
    predict_cmd->add_option("--out", prd.out, "Output TSV (default stdout)");

    McdArgs mcd;
    auto* mcd_cmd = app.add_subcommand("mcd", "Monte Carlo dropout over sampled images of each length category");
    add_config(mcd_cmd);
    mcd_cmd->add_option("--model", mcd.model, "Binary checkpoint")->required();
    mcd_cmd->add_option("--index", mcd.index, "TSV of candidate images")->required();
    mcd_cmd->add_option("--categories", mcd.categories, "Categories file from split")
        ->required();
    mcd_cmd->add_option("--out-dir", mcd.out_dir, "Writes predictions.jsonl, report.csv, report_extremes.csv")
        ->required();
    mcd_cmd->add_option("--passes", cfg.mcd.passes, "Stochastic passes per image")->capture_default_str();
    mcd_cmd->add_option("--dropout-rates", cfg.mcd.dropout_rates, "Comma-separated dropout rates")
        ->delimiter(',')
        ->capture_default_str();
    mcd_cmd->add_option("--samples-per-category", cfg.mcd.samples_per_category, "Images drawn per category")
        ->capture_default_str();
    mcd_cmd->add_option("--bins", mcd.bins, "Histogram bins (0 disables histograms)")->capture_default_str();
    add_seed(mcd_cmd, mcd.seed);

    ReportArgs rep;
    auto* report_cmd = app.add_subcommand("report", "Recompute the uncertainty report from a predictions file");
    add_config(report_cmd);
    report_cmd->add_option("--predictions", rep.predictions, "predictions.jsonl")
        ->required();
    report_cmd->add_option("--out-dir", rep.out_dir, "Writes report.csv, report_extremes.csv, histograms/")
        ->required();
    report_cmd->add_option("--bins", rep.bins, "Histogram bins (0 disables histograms)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*encode_cmd) {
            cfg.encoding.validate();
            return run_encode(enc, cfg);
        }
        if (*split_cmd) return run_split(spl, cfg);
        if (*train_cmd) {
            cfg.train.optimizer = optimizer == "adam" ? TrainConfig::Optimizer::adam : TrainConfig::Optimizer::sgd;
            return run_train(trn, cfg);
        }
        if (*eval_cmd) return run_eval(evl);
        if (*predict_cmd) return run_predict(prd);
        if (*mcd_cmd) return run_mcd(mcd, cfg);
        if (*report_cmd) return run_report(rep);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const TrainingDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
