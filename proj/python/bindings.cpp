#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "proteoknight/dataset.hpp"
#include "proteoknight/encoder.hpp"
#include "proteoknight/error.hpp"
#include "proteoknight/image.hpp"
#include "proteoknight/mcd.hpp"
#include "proteoknight/metrics.hpp"
#include "proteoknight/network.hpp"
#include "proteoknight/sequence.hpp"

namespace py = pybind11;
using namespace proteoknight;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

py::array_t<std::uint8_t> to_array(const Image& img) {
    py::array_t<std::uint8_t> out({img.height, img.width, 3});
    std::memcpy(out.mutable_data(), img.pixels.data(), img.pixels.size());
    return out;
}

Image from_array(const ImageArray& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("expected an HxWx3 uint8 array");
    Image img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::memcpy(img.pixels.data(), a.data(), img.pixels.size());
    return img;
}

EncodingConfig encoding(int size, double radius, int point_size) {
    EncodingConfig cfg{size, radius, point_size};
    cfg.validate();
    return cfg;
}

ClassLabel label_or_throw(const std::string& name) {
    const auto l = parse_label(name);
    if (!l) throw std::invalid_argument("unknown label '" + name + "'");
    return *l;
}

py::object optional_value(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

std::vector<std::vector<double>> passes_of(const PredictionDistribution& d) { return d.passes; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Walk-image encoding, dropout classifier and Monte Carlo dropout statistics";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    m.attr("RESIDUES") = std::string(kResidues.begin(), kResidues.end());

    // ---- sequences ----
    py::class_<ProteinSequence>(m, "ProteinSequence")
        .def(py::init([](std::string id, std::string residues) { return ProteinSequence{id, residues, 0}; }),
             py::arg("id"), py::arg("residues"))
        .def_readwrite("id", &ProteinSequence::id)
        .def_readwrite("residues", &ProteinSequence::residues)
        .def_readonly("skipped", &ProteinSequence::skipped)
        .def("__len__", &ProteinSequence::length)
        .def("__repr__", [](const ProteinSequence& s) {
            return "ProteinSequence('" + s.id + "', length=" + std::to_string(s.length()) + ")";
        });

    m.def(
        "parse_fasta",
        [](const std::string& text, bool strict) {
            return parse_fasta(text, strict ? SanitizePolicy::strict : SanitizePolicy::skip);
        },
        py::arg("text"), py::arg("strict") = false,
        "Parse FASTA text. Non-standard residues are dropped (and counted) unless strict.");
    m.def(
        "load_manifest",
        [](const std::string& text) {
            std::map<std::string, std::string> out;
            for (const auto& [id, label] : load_manifest(text)) out[id] = std::string(label_name(label));
            return out;
        },
        py::arg("text"), "Parse an id<TAB>label manifest into {id: label}.");

    // ---- encoder ----
    m.def("angle_degrees", [](char r) { return standard_table().angle_degrees(r); }, py::arg("residue"));
    m.def(
        "color",
        [](char r) {
            const auto c = standard_table().color(r);
            return py::make_tuple(c.r, c.g, c.b);
        },
        py::arg("residue"));
    m.def(
        "displacement",
        [](char r, double radius) {
            const auto d = displacement(r, standard_table(), radius);
            return py::make_tuple(d.dx, d.dy);
        },
        py::arg("residue"), py::arg("radius") = 15.0);

    py::class_<WalkStep>(m, "WalkStep")
        .def_readonly("x", &WalkStep::x)
        .def_readonly("y", &WalkStep::y)
        .def_readonly("reset_x", &WalkStep::reset_x)
        .def_readonly("reset_y", &WalkStep::reset_y)
        .def_readonly("cx", &WalkStep::cx)
        .def_readonly("cy", &WalkStep::cy)
        .def_readonly("stamped", &WalkStep::stamped);

    m.def(
        "trace_walk",
        [](const std::string& seq, int size, double radius, int point_size) {
            return trace_walk(seq, encoding(size, radius, point_size));
        },
        py::arg("residues"), py::arg("size") = 512, py::arg("radius") = 15.0, py::arg("point_size") = 2);
    m.def(
        "encode",
        [](const std::string& seq, int size, double radius, int point_size) {
            const auto cfg = encoding(size, radius, point_size);
            Image img;
            {
                py::gil_scoped_release release;
                img = encode(seq, cfg);
            }
            return to_array(img);
        },
        py::arg("residues"), py::arg("size") = 512, py::arg("radius") = 15.0, py::arg("point_size") = 2,
        "Render a sequence as a size x size x 3 uint8 array.");
    m.def(
        "encode_corpus",
        [](const std::vector<ProteinSequence>& seqs, const std::filesystem::path& out_dir,
           const std::map<std::string, std::string>& labels, int size, double radius, int point_size, unsigned jobs) {
            LabelMap map;
            for (const auto& [id, name] : labels) map[id] = label_or_throw(name);
            const auto cfg = encoding(size, radius, point_size);
            CorpusResult res;
            {
                py::gil_scoped_release release;
                res = encode_corpus(seqs, map, cfg, out_dir, {jobs, false});
            }
            std::vector<py::tuple> rows;
            for (const auto& r : res.index) rows.push_back(py::make_tuple(r.id, r.path, r.label));
            return py::make_tuple(rows, res.failures);
        },
        py::arg("sequences"), py::arg("out_dir"), py::arg("labels") = std::map<std::string, std::string>{},
        py::arg("size") = 512, py::arg("radius") = 15.0, py::arg("point_size") = 2, py::arg("jobs") = 1,
        "Write <id>.png per sequence; returns ([(id, path, label)], failures).");
    m.def("read_png", [](const std::filesystem::path& p) { return to_array(read_png(p)); }, py::arg("path"));
    m.def("write_png", [](const ImageArray& a, const std::filesystem::path& p) { write_png(from_array(a), p); },
          py::arg("image"), py::arg("path"));

    // ---- dataset ----
    m.def(
        "find_equilibrium_delta", [](const std::vector<std::size_t>& v) { return find_equilibrium_delta(v); },
        py::arg("lengths"));
    m.def(
        "categorize",
        [](std::size_t length, const std::string& label, std::size_t delta_pvp, std::size_t delta_nonpvp) {
            SplitConfig cfg;
            cfg.delta_pvp = delta_pvp;
            cfg.delta_nonpvp = delta_nonpvp;
            return std::string(category_name(categorize(length, label_or_throw(label), cfg)));
        },
        py::arg("length"), py::arg("label"), py::arg("delta_pvp") = 350, py::arg("delta_nonpvp") = 275);

    // ---- metrics ----
    m.def(
        "compute_metrics",
        [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
            const auto r = compute_metrics({tp, tn, fp, fn});
            py::dict d;
            d["accuracy"] = optional_value(r.accuracy);
            d["precision"] = optional_value(r.precision);
            d["recall"] = optional_value(r.recall);
            d["specificity"] = optional_value(r.specificity);
            d["f1"] = optional_value(r.f1);
            return d;
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"),
        "Accuracy, precision, recall, specificity and F1; None where a denominator is zero.");
    m.def("f1_score", [](double p, double r) { return optional_value(f1_score(p, r)); }, py::arg("precision"),
          py::arg("recall"));

    // ---- uncertainty statistics ----
    m.def("binary_entropy", &binary_entropy, py::arg("p"), "Binary entropy in bits.");
    m.def("variance", [](const std::vector<double>& v) { return variance(v); }, py::arg("values"));
    m.def("variance_moment_form", [](const std::vector<double>& v) { return variance_moment_form(v); },
          py::arg("values"));
    m.def(
        "expectation",
        [](const std::vector<std::vector<double>>& passes) {
            PredictionDistribution d;
            d.passes = passes;
            return expectation(d);
        },
        py::arg("passes"));
    m.def("histogram", [](const std::vector<double>& v, int bins) { return histogram(v, bins); }, py::arg("values"),
          py::arg("bins") = 10);
    m.def(
        "report_from_predictions",
        [](const std::string& jsonl) { return format_report_csv(summarize(parse_predictions(jsonl))); },
        py::arg("jsonl"), "Recompute the report CSV from predictions JSONL text.");

    // ---- classifier ----
    py::class_<Network>(m, "Network")
        .def(py::init([](int input_size, std::vector<int> conv_channels, int hidden, const std::string& task,
                         std::uint64_t seed) {
                 NetworkSpec spec;
                 spec.input_size = input_size;
                 spec.conv_channels = std::move(conv_channels);
                 spec.hidden = hidden;
                 if (task == "binary") spec.task = Task::binary;
                 else if (task == "multiclass") spec.task = Task::multiclass;
                 else throw std::invalid_argument("task must be 'binary' or 'multiclass'");
                 spec.classes = spec.task == Task::binary ? 2 : kNumMulticlass;
                 spec.validate();
                 return Network(spec, seed);
             }),
             py::arg("input_size") = 64, py::arg("conv_channels") = std::vector<int>{8, 16}, py::arg("hidden") = 64,
             py::arg("task") = "binary", py::arg("seed") = 0)
        .def_static("load", &Network::load, py::arg("path"))
        .def("save", &Network::save, py::arg("path"))
        .def_property_readonly("parameter_count", &Network::parameter_count)
        .def_property_readonly("input_size", [](const Network& n) { return n.spec().input_size; })
        .def_property_readonly("classes", [](const Network& n) { return n.spec().classes; })
        .def(
            "predict",
            [](const Network& n, const ImageArray& img) {
                return n.predict(image_to_input(from_array(img), n.spec().input_size));
            },
            py::arg("image"), "Class probabilities with dropout off.")
        .def(
            "mc_predict",
            [](const Network& n, const ImageArray& img, int passes, double rate, std::uint64_t seed) {
                const auto input = image_to_input(from_array(img), n.spec().input_size);
                return passes_of(mc_predict(n, input, passes, rate, seed));
            },
            py::arg("image"), py::arg("passes") = 100, py::arg("rate") = 0.2, py::arg("seed") = 0,
            "One probability vector per dropout pass.")
        .def(
            "train",
            [](Network& n, const std::vector<ImageArray>& images, const std::vector<int>& labels, int epochs,
               int batch_size, double learning_rate, double dropout, const std::string& optimizer,
               std::uint64_t seed) {
                if (images.size() != labels.size()) throw std::invalid_argument("images/labels length mismatch");
                std::vector<Sample> data;
                for (std::size_t i = 0; i < images.size(); ++i)
                    data.push_back({image_to_input(from_array(images[i]), n.spec().input_size), labels[i]});
                TrainConfig cfg;
                cfg.epochs = epochs;
                cfg.batch_size = batch_size;
                cfg.learning_rate = learning_rate;
                cfg.dropout = dropout;
                cfg.seed = seed;
                if (optimizer == "adam") cfg.optimizer = TrainConfig::Optimizer::adam;
                else if (optimizer != "sgd") throw std::invalid_argument("optimizer must be 'sgd' or 'adam'");
                cfg.validate();
                TrainReport report;
                {
                    py::gil_scoped_release release;
                    report = train(n, data, cfg);
                }
                return py::make_tuple(report.loss_history, report.train_accuracy);
            },
            py::arg("images"), py::arg("labels"), py::arg("epochs") = 25, py::arg("batch_size") = 32,
            py::arg("learning_rate") = 0.001, py::arg("dropout") = 0.2, py::arg("optimizer") = "sgd",
            py::arg("seed") = 0, "Train in place; returns (loss per epoch, train accuracy).");
}
