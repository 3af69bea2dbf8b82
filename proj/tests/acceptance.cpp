// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "proteoknight/encoder.hpp"
#include "proteoknight/mcd.hpp"
#include "proteoknight/metrics.hpp"
#include "proteoknight/network.hpp"
#include "proteoknight/rng.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace proteoknight;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << std::endl;
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

std::vector<oracle::Center> library_centers(std::string_view seq, const EncodingConfig& cfg) {
    std::vector<oracle::Center> out;
    for (const auto& s : trace_walk(seq, cfg))
        if (s.stamped) out.push_back({static_cast<int>(s.cx), static_cast<int>(s.cy)});
    return out;
}

Outcome geometry_oracle() {
    const auto t0 = Clock::now();
    Rng rng(20240601);
    const EncodingConfig cfg;
    std::size_t centers = 0;
    for (int i = 0; i < 50; ++i) {
        const auto seq = testutil::random_sequence(rng, 1 + rng.below(200));
        const auto want = oracle::walk_centers(seq, cfg.size);
        if (library_centers(seq, cfg) != want) return {false, "sequence " + std::to_string(i) + " differs"};
        centers += want.size();
    }
    const double t = seconds_since(t0);
    return {t < 60.0, "50 sequences, " + std::to_string(centers) + " centers identical, " + fmt(t, 3) + " s"};
}

Outcome worked_examples() {
    const auto& table = standard_table();
    const double g = table.angle_degrees('G');
    const double c = table.angle_degrees('C');
    const auto centers = library_centers("A", EncodingConfig{});
    const Image img = encode("A", EncodingConfig{});
    const bool disk = centers.size() == 1 && centers[0] == oracle::Center{271, 256} &&
                      img.at(271, 256) == Rgb{255, 0, 0} && img.at(273, 256) == Rgb{255, 0, 0} &&
                      img.at(274, 256) == Rgb{0, 0, 0};
    return {g == 90.0 && c == 18.0 && disk,
            "angle(G)=" + fmt(g) + " angle(C)=" + fmt(c) + " single A disk at (" +
                (centers.empty() ? std::string("none") : std::to_string(centers[0].x) + "," +
                                                             std::to_string(centers[0].y)) +
                ")"};
}

Outcome boundary_reset() {
    std::string detail;
    for (int m : {64, 128, 512}) {
        EncodingConfig cfg;
        cfg.size = m;
        const std::string seq(120, 'A');
        const auto lib = trace_walk(seq, cfg);
        const auto ref = oracle::walk_x_trace(seq, m);
        int resets = 0;
        double prev = m / 2.0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const bool guard = prev < 0 || prev > m;
            if (lib[i].reset_x != ref[i].second || lib[i].reset_x != guard || lib[i].x != ref[i].first)
                return {false, "M=" + std::to_string(m) + " step " + std::to_string(i) + " disagrees"};
            resets += lib[i].reset_x;
            prev = lib[i].x;
        }
        if (resets == 0) return {false, "M=" + std::to_string(m) + " never reset"};
        detail += "M=" + std::to_string(m) + ":" + std::to_string(resets) + " resets ";
    }
    return {true, detail + "(all match brute force)"};
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
    files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const auto other = b / e.path().filename();
        if (!fs::exists(other) || testutil::read_bytes(e.path()) != testutil::read_bytes(other)) return false;
        ++files;
    }
    std::size_t count_b = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
    return count_b == files;
}

Outcome determinism() {
    const auto corpus = synthetic::make_corpus(1000, 77);
    LabelMap labels;
    for (std::size_t i = 0; i < corpus.sequences.size(); ++i) labels[corpus.sequences[i].id] = corpus.labels[i];
    testutil::TempDir dir;
    // Both runs write to the same path (index rows carry it) and are then moved aside.
    const auto out = dir.path() / "out";
    std::size_t failed = 0;
    for (unsigned jobs : {1u, 8u}) {
        const auto res = encode_corpus(corpus.sequences, labels, EncodingConfig{}, out, {jobs, false});
        failed += res.failures.size() + (1000 - res.index.size());
        testutil::write_file(out / "index.tsv", format_index(res.index));
        fs::rename(out, dir.path() / ("jobs" + std::to_string(jobs)));
    }
    std::size_t files = 0;
    const bool same = same_tree(dir.path() / "jobs1", dir.path() / "jobs8", files);
    return {same && failed == 0 && files == 1001,
            std::to_string(files) + " files (1000 PNGs + index) " + (same ? "byte-identical" : "differ")};
}

Outcome throughput() {
    const auto corpus = synthetic::make_corpus(500, 91, 50, 1000);
    testutil::TempDir dir;
    const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    const auto t0 = Clock::now();
    const auto res = encode_corpus(corpus.sequences, {}, EncodingConfig{}, dir.path(), {jobs, false});
    const double t = seconds_since(t0);
    const double rate = static_cast<double>(res.index.size()) / t;
    return {res.failures.empty() && rate >= 100.0,
            fmt(rate, 4) + " seq/s at M=512 (500 sequences, N 50-1000, PNGs written, " + std::to_string(jobs) +
                " worker(s))"};
}

Outcome metrics_identities() {
    const auto f1 = f1_score(0.83, 0.91);
    if (!f1) return {false, "F1 undefined"};
    const bool published = std::abs(*f1 - 0.868) <= 0.005 && std::round(*f1 * 100) / 100 == 0.87;

    Rng rng(4242);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::uint64_t span = trial % 4 == 0 ? 3 : 1000;  // small counts hit zero denominators
        ConfusionCounts c{rng.below(span), rng.below(span), rng.below(span), rng.below(span)};
        const auto m = compute_metrics(c);
        const long double tp = c.tp, tn = c.tn, fp = c.fp, fn = c.fn;
        auto ratio = [](long double num, long double den) -> std::optional<long double> {
            if (den == 0) return std::nullopt;
            return num / den;
        };
        const auto acc = ratio(tp + tn, tp + tn + fp + fn);
        const auto pre = ratio(tp, tp + fp);
        const auto rec = ratio(tp, tp + fn);
        const auto spe = ratio(tn, tn + fp);
        std::optional<long double> f;
        if (pre && rec && *pre + *rec > 0) f = 2 * *pre * *rec / (*pre + *rec);
        const std::pair<std::optional<double>, std::optional<long double>> pairs[] = {
            {m.accuracy, acc}, {m.precision, pre}, {m.recall, rec}, {m.specificity, spe}, {m.f1, f}};
        for (const auto& [got, want] : pairs) {
            if (got.has_value() != want.has_value()) return {false, "definedness differs at trial " + std::to_string(trial)};
            if (got) worst = std::max(worst, static_cast<double>(std::abs(*got - *want)));
        }
    }
    return {published && worst <= 1e-12,
            "F1(0.83,0.91)=" + fmt(*f1, 6) + " rounds to " + fmt(std::round(*f1 * 100) / 100, 3) +
                "; 10000 random matrices max error " + fmt(worst, 3)};
}

Outcome mcd_math() {
    const std::vector<double> constant(100, 0.7316);
    std::vector<double> half(100, 0.0);
    std::fill(half.begin() + 50, half.end(), 1.0);
    const bool exact = variance(constant) == 0.0 && variance(half) == 0.25;

    Rng rng(31337);
    double worst_var = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> v(2 + rng.below(199));
        const int mode = trial % 3;
        for (double& x : v) {
            x = rng.uniform();
            if (mode == 1) x = x * x * x;                  // skewed toward 0
            if (mode == 2) x = 0.5 + 0.01 * (x - 0.5);    // tight cluster
        }
        const double want = oracle::definitional_variance(v);
        worst_var = std::max({worst_var, std::abs(variance_moment_form(v) - want), std::abs(variance(v) - want)});
    }

    double worst_h = std::abs(binary_entropy(0.5) - 1.0);
    const bool ends = binary_entropy(0.0) == 0.0 && binary_entropy(1.0) == 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double p = rng.uniform();
        worst_h = std::max({worst_h, std::abs(binary_entropy(p) - binary_entropy(1.0 - p)),
                            std::abs(binary_entropy(p) - oracle::entropy_bits(p))});
    }
    return {exact && ends && worst_var <= 1e-12 && worst_h <= 1e-12,
            "Var(const)=" + fmt(variance(constant)) + " Var(half/half)=" + fmt(variance(half)) +
                "; moment vs definitional max " + fmt(worst_var, 3) + " over 10^4; H(0.5)=" +
                fmt(binary_entropy(0.5)) + " H(0)=H(1)=0: " + (ends ? "yes" : "no") + "; entropy max error " +
                fmt(worst_h, 3)};
}

Outcome gradient_check() {
    NetworkSpec spec;  // default architecture
    Network net(spec, 606);
    Rng rng(707);
    for (double& p : net.parameters()) p += 0.02 * rng.uniform(-1, 1);
    Tensor x(spec.input_channels, spec.input_size, spec.input_size);
    for (double& v : x.data) v = rng.uniform();
    std::vector<double> grad(net.parameter_count(), 0.0);
    net.loss_and_gradient(x, 1, nullptr, grad);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t i = rng.below(net.parameter_count());
        auto params = net.parameters();
        const double orig = params[i];
        const double h = 1e-6;
        params[i] = orig + h;
        const double up = net.loss_and_gradient(x, 1, nullptr, {});
        params[i] = orig - h;
        const double down = net.loss_and_gradient(x, 1, nullptr, {});
        params[i] = orig;
        const double numeric = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - grad[i]) / std::max({std::abs(numeric), std::abs(grad[i]), 1e-7}));
    }
    return {worst < 1e-4, "20 probes on " + std::to_string(net.parameter_count()) +
                              " parameters, max relative error " + fmt(worst, 3)};
}

// ---- end-to-end through the command-line tool --------------------------------

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(testutil::read_bytes(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int sh(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

struct Recomputed {
    long double mean = 0, var = 0, h_passes = 0, h_mean = 0;
    std::size_t n = 0;
};

// Independent reading of the predictions file and recomputation of every
// report row in long double.
std::map<std::pair<std::string, double>, Recomputed> recompute(const fs::path& jsonl) {
    std::map<std::tuple<std::string, double, std::string>, std::vector<double>> passes;
    std::istringstream in(testutil::read_bytes(jsonl));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        passes[{j["category"].get<std::string>(), j["dropout_rate"].get<double>(), j["id"].get<std::string>()}]
            .push_back(j["probs"][1].get<double>());
    }
    std::map<std::pair<std::string, double>, Recomputed> out;
    for (const auto& [key, p] : passes) {
        auto& r = out[{std::get<0>(key), std::get<1>(key)}];
        long double s = 0, h = 0;
        for (double v : p) {
            s += v;
            h += oracle::entropy_bits(v);
        }
        const long double m = s / p.size();
        r.mean += m;
        r.var += oracle::definitional_variance(p);
        r.h_passes += h / p.size();
        r.h_mean += oracle::entropy_bits(static_cast<double>(m));
        ++r.n;
    }
    for (auto& [key, r] : out) {
        r.mean /= r.n;
        r.var /= r.n;
        r.h_passes /= r.n;
        r.h_mean /= r.n;
    }
    return out;
}

struct PipelineRun {
    bool ok = false;
    std::string detail;
    double seconds = 0;
    double accuracy = 0;
    fs::path mcd_dir, report_dir;
};

PipelineRun run_pipeline(const fs::path& work) {
    PipelineRun run;
    const std::string cli = PROTEOKNIGHT_CLI;
    const auto corpus = synthetic::make_corpus(400, 2024);
    testutil::write_file(work / "toy.fasta", corpus.fasta());
    testutil::write_file(work / "manifest.tsv", corpus.manifest());
    const std::string w = work.string();
    const std::string quiet = " > " + w + "/log.txt 2>&1";
    const std::vector<std::pair<std::string, std::string>> steps = {
        {"encode", "encode --fasta " + w + "/toy.fasta --manifest " + w + "/manifest.tsv --out-dir " + w +
                       "/img --jobs " + std::to_string(std::max(1u, std::thread::hardware_concurrency()))},
        {"split", "split --index " + w + "/img/index.tsv --fasta " + w + "/toy.fasta --out-dir " + w +
                      "/split --auto-delta --seed 11"},
        {"train", "train --train " + w + "/split/train.tsv --model " + w + "/model.txt --seed 11"},
        {"eval", "eval --model " + w + "/model.txt --test " + w + "/split/test.tsv --metrics-csv " + w + "/metrics.csv"},
        {"mcd", "mcd --model " + w + "/model.txt --index " + w + "/split/test.tsv --categories " + w +
                    "/split/categories.tsv --out-dir " + w + "/mcd --passes 100 --samples-per-category 10" +
                    " --dropout-rates 0,0.1,0.2,0.3 --seed 11"},
        {"report", "report --predictions " + w + "/mcd/predictions.jsonl --out-dir " + w + "/report"},
    };
    const auto t0 = Clock::now();
    for (const auto& [name, args] : steps) {
        const int rc = sh(cli + " " + args + quiet);
        if (rc != 0) {
            run.detail = name + " exited " + std::to_string(rc) + ": " + testutil::read_bytes(work / "log.txt");
            return run;
        }
    }
    run.seconds = seconds_since(t0);
    for (const auto& row : read_csv(work / "metrics.csv"))
        if (row.size() == 2 && row[0] == "accuracy") run.accuracy = std::stod(row[1]);
    run.mcd_dir = work / "mcd";
    run.report_dir = work / "report";
    run.ok = true;
    return run;
}

}  // namespace

int main() {
    std::cout << "acceptance suite" << std::endl;
    run("encoder geometry oracle", geometry_oracle);
    run("worked examples", worked_examples);
    run("boundary reset", boundary_reset);
    run("determinism 1 vs 8 workers", determinism);
    run("throughput", throughput);
    run("metrics identities", metrics_identities);
    run("MCD math", mcd_math);
    run("gradient check", gradient_check);

    testutil::TempDir work;
    PipelineRun pipe;
    try {
        pipe = run_pipeline(work.path());
    } catch (const std::exception& e) {
        pipe.detail = e.what();
    }
    run("end-to-end toy pipeline", [&]() -> Outcome {
        if (!pipe.ok) return {false, pipe.detail};
        std::size_t zero_rows = 0, rate0_rows = 0;
        for (const auto& row : read_csv(pipe.report_dir / "report.csv")) {
            if (row.size() < 4 || row[0] == "category" || std::stod(row[1]) != 0.0) continue;
            ++rate0_rows;
            zero_rows += std::stod(row[3]) == 0.0;
        }
        for (const auto& row : read_csv(pipe.mcd_dir / "report_extremes.csv")) {
            if (row.size() < 6 || row[0] == "category" || std::stod(row[1]) != 0.0) continue;
            ++rate0_rows;
            zero_rows += std::stod(row[5]) == 0.0;
        }
        const bool ok = pipe.seconds < 600 && pipe.accuracy >= 0.90 && rate0_rows > 0 && zero_rows == rate0_rows;
        return {ok, "400 sequences in " + fmt(pipe.seconds, 4) + " s, test accuracy " + fmt(pipe.accuracy, 4) +
                        ", rate-0 variances exactly 0: " + std::to_string(zero_rows) + "/" +
                        std::to_string(rate0_rows)};
    });
    run("report recomputable from predictions", [&]() -> Outcome {
        if (!pipe.ok) return {false, "pipeline did not run"};
        const auto want = recompute(pipe.mcd_dir / "predictions.jsonl");
        double worst = 0.0;
        std::size_t rows = 0;
        for (const auto& dir : {pipe.mcd_dir, pipe.report_dir}) {
            for (const auto& row : read_csv(dir / "report.csv")) {
                if (row.size() != 7 || row[0] == "category") continue;
                const auto it = want.find({row[0], std::stod(row[1])});
                if (it == want.end()) return {false, "unexpected row " + row[0] + "," + row[1]};
                const auto& r = it->second;
                if (std::stoul(row[6]) != r.n) return {false, "sample count differs for " + row[0]};
                const long double vals[] = {r.mean, r.var, r.h_passes, r.h_mean};
                for (int c = 0; c < 4; ++c)
                    worst = std::max(worst, static_cast<double>(std::abs(std::stod(row[2 + c]) - vals[c])));
                ++rows;
            }
        }
        const bool ok = rows == 2 * want.size() && worst <= 1e-12;
        return {ok, std::to_string(rows) + " report rows vs independent recomputation, max error " + fmt(worst, 3)};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
