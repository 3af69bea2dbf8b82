#include "proteoknight/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "proteoknight/error.hpp"
#include "proteoknight/index.hpp"
#include "proteoknight/sequence.hpp"

namespace proteoknight {

Tensor image_to_input(const Image& image, int side) {
    if (side <= 0 || image.width <= 0 || image.height <= 0)
        throw std::invalid_argument("cannot resample an empty image");
    Tensor out(3, side, side);
    const double sx = static_cast<double>(image.width) / side;
    const double sy = static_cast<double>(image.height) / side;
    for (int oy = 0; oy < side; ++oy) {
        const double y0 = oy * sy, y1 = (oy + 1) * sy;
        for (int ox = 0; ox < side; ++ox) {
            const double x0 = ox * sx, x1 = (ox + 1) * sx;
            double acc[3] = {0.0, 0.0, 0.0};
            for (int py = static_cast<int>(std::floor(y0)); py < static_cast<int>(std::ceil(y1)); ++py) {
                const double wy = std::min<double>(py + 1, y1) - std::max<double>(py, y0);
                if (wy <= 0.0) continue;
                for (int px = static_cast<int>(std::floor(x0)); px < static_cast<int>(std::ceil(x1)); ++px) {
                    const double w = wy * (std::min<double>(px + 1, x1) - std::max<double>(px, x0));
                    if (w <= 0.0) continue;
                    const Rgb c = image.at(px, py);
                    acc[0] += w * c.r;
                    acc[1] += w * c.g;
                    acc[2] += w * c.b;
                }
            }
            const double norm = 1.0 / (sx * sy * 255.0);
            for (int c = 0; c < 3; ++c) out.at(c, oy, ox) = acc[c] * norm;
        }
    }
    return out;
}

std::string_view task_name(Task t) noexcept { return t == Task::binary ? "binary" : "multiclass"; }

void NetworkSpec::validate() const {
    if (input_size <= 0 || input_channels <= 0 || hidden <= 0 || classes < 2)
        throw std::invalid_argument("network dimensions must be positive and classes >= 2");
    int side = input_size;
    for (int c : conv_channels) {
        if (c <= 0) throw std::invalid_argument("conv channels must be positive");
        if (side % 2 != 0) throw std::invalid_argument("input size must stay even through every pooling stage");
        side /= 2;
    }
    if (task == Task::binary && classes != 2) throw std::invalid_argument("binary task needs 2 classes");
}

int NetworkSpec::flat_features() const {
    int side = input_size;
    int ch = input_channels;
    for (int c : conv_channels) {
        side /= 2;
        ch = c;
    }
    return ch * side * side;
}

DropoutMask DropoutMask::sample(std::size_t units, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("dropout rate must lie in [0, 1)");
    DropoutMask m;
    m.rate = rate;
    m.keep.resize(units);
    for (auto& k : m.keep) k = rate == 0.0 ? 1 : static_cast<std::uint8_t>(rng.bernoulli(1.0 - rate));
    return m;
}

Network::Network(NetworkSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
    spec_.validate();
    layout();
    Rng rng(seed);
    auto init = [&](std::size_t offset, std::size_t count, int fan_in) {
        const double limit = std::sqrt(6.0 / fan_in);
        for (std::size_t i = 0; i < count; ++i) params_[offset + i] = rng.uniform(-limit, limit);
    };
    for (const auto& c : conv_)
        init(c.weights, static_cast<std::size_t>(c.out_channels) * c.in_channels * 9, c.in_channels * 9);
    init(fc1_w_, static_cast<std::size_t>(spec_.hidden) * spec_.flat_features(), spec_.flat_features());
    init(fc2_w_, static_cast<std::size_t>(spec_.classes) * spec_.hidden, spec_.hidden);
}

Network::Network(NetworkSpec spec, std::vector<double> params) : spec_(std::move(spec)) {
    spec_.validate();
    layout();
    if (params.size() != params_.size())
        throw DataError("checkpoint has " + std::to_string(params.size()) + " parameters, architecture needs " +
                        std::to_string(params_.size()));
    params_ = std::move(params);
}

void Network::layout() {
    std::size_t offset = 0;
    int side = spec_.input_size;
    int in = spec_.input_channels;
    conv_.clear();
    for (int out : spec_.conv_channels) {
        ConvLayer l{in, out, side, offset, 0};
        offset += static_cast<std::size_t>(out) * in * 9;
        l.bias = offset;
        offset += static_cast<std::size_t>(out);
        conv_.push_back(l);
        in = out;
        side /= 2;
    }
    const auto flat = static_cast<std::size_t>(spec_.flat_features());
    fc1_w_ = offset;
    offset += flat * spec_.hidden;
    fc1_b_ = offset;
    offset += spec_.hidden;
    fc2_w_ = offset;
    offset += static_cast<std::size_t>(spec_.hidden) * spec_.classes;
    fc2_b_ = offset;
    offset += spec_.classes;
    params_.assign(offset, 0.0);
}

void Network::check_input(const Tensor& input) const {
    if (input.channels != spec_.input_channels || input.height != spec_.input_size ||
        input.width != spec_.input_size)
        throw std::invalid_argument("input is " + std::to_string(input.channels) + "x" +
                                    std::to_string(input.height) + "x" + std::to_string(input.width) +
                                    ", model expects " + std::to_string(spec_.input_channels) + "x" +
                                    std::to_string(spec_.input_size) + "x" + std::to_string(spec_.input_size));
}

namespace {

// 3x3 convolution with zero padding: out[o] = b[o] + sum_i w[o][i] * in[i].
void conv3x3(const double* w, const double* b, const Tensor& in, Tensor& out) {
    const int s = in.height;
    for (int o = 0; o < out.channels; ++o) {
        double* dst = &out.data[static_cast<std::size_t>(o) * s * s];
        std::fill(dst, dst + static_cast<std::size_t>(s) * s, b[o]);
        for (int i = 0; i < in.channels; ++i) {
            const double* src = &in.data[static_cast<std::size_t>(i) * s * s];
            const double* k = w + (static_cast<std::size_t>(o) * in.channels + i) * 9;
            for (int ky = 0; ky < 3; ++ky) {
                const int y_lo = std::max(0, 1 - ky), y_hi = std::min(s, s + 1 - ky);
                for (int kx = 0; kx < 3; ++kx) {
                    const double wv = k[ky * 3 + kx];
                    const int x_lo = std::max(0, 1 - kx), x_hi = std::min(s, s + 1 - kx);
                    for (int y = y_lo; y < y_hi; ++y) {
                        double* drow = dst + static_cast<std::size_t>(y) * s;
                        const double* srow = src + static_cast<std::size_t>(y + ky - 1) * s + (kx - 1);
                        for (int x = x_lo; x < x_hi; ++x) drow[x] += wv * srow[x];
                    }
                }
            }
        }
    }
}

// Gradients of conv3x3 given d(out). din may be null.
void conv3x3_backward(const double* w, const Tensor& in, const Tensor& dout, double* dw, double* db,
                      Tensor* din) {
    const int s = in.height;
    for (int o = 0; o < dout.channels; ++o) {
        const double* g = &dout.data[static_cast<std::size_t>(o) * s * s];
        db[o] += std::accumulate(g, g + static_cast<std::size_t>(s) * s, 0.0);
        for (int i = 0; i < in.channels; ++i) {
            const double* src = &in.data[static_cast<std::size_t>(i) * s * s];
            double* dsrc = din ? &din->data[static_cast<std::size_t>(i) * s * s] : nullptr;
            const std::size_t kbase = (static_cast<std::size_t>(o) * in.channels + i) * 9;
            for (int ky = 0; ky < 3; ++ky) {
                const int y_lo = std::max(0, 1 - ky), y_hi = std::min(s, s + 1 - ky);
                for (int kx = 0; kx < 3; ++kx) {
                    const int x_lo = std::max(0, 1 - kx), x_hi = std::min(s, s + 1 - kx);
                    const double wv = w[kbase + ky * 3 + kx];
                    double acc = 0.0;
                    for (int y = y_lo; y < y_hi; ++y) {
                        const double* grow = g + static_cast<std::size_t>(y) * s;
                        const std::size_t off = static_cast<std::size_t>(y + ky - 1) * s + (kx - 1);
                        const double* srow = src + off;
                        for (int x = x_lo; x < x_hi; ++x) acc += grow[x] * srow[x];
                        if (dsrc) {
                            double* drow = dsrc + off;
                            for (int x = x_lo; x < x_hi; ++x) drow[x] += wv * grow[x];
                        }
                    }
                    dw[kbase + ky * 3 + kx] += acc;
                }
            }
        }
    }
}

void relu_inplace(Tensor& t) {
    for (double& v : t.data) v = v > 0.0 ? v : 0.0;
}

// 2x2 max pooling; argmax holds the flat source index of each output.
Tensor maxpool2(const Tensor& in, std::vector<std::uint32_t>* argmax) {
    Tensor out(in.channels, in.height / 2, in.width / 2);
    if (argmax) argmax->resize(out.size());
    std::size_t o = 0;
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x, ++o) {
                std::size_t best = (static_cast<std::size_t>(c) * in.height + 2 * y) * in.width + 2 * x;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const std::size_t idx =
                            (static_cast<std::size_t>(c) * in.height + 2 * y + dy) * in.width + 2 * x + dx;
                        if (in.data[idx] > in.data[best]) best = idx;
                    }
                out.data[o] = in.data[best];
                if (argmax) (*argmax)[o] = static_cast<std::uint32_t>(best);
            }
    return out;
}

void softmax_inplace(std::vector<double>& z) {
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

}  // namespace

std::vector<double> Network::features(const Tensor& input) const {
    check_input(input);
    Tensor cur = input;
    for (const auto& l : conv_) {
        Tensor z(l.out_channels, l.size, l.size);
        conv3x3(&params_[l.weights], &params_[l.bias], cur, z);
        relu_inplace(z);
        cur = maxpool2(z, nullptr);
    }
    const auto flat = cur.size();
    std::vector<double> h(static_cast<std::size_t>(spec_.hidden));
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double* w = &params_[fc1_w_ + j * flat];
        double acc = params_[fc1_b_ + j];
        for (std::size_t k = 0; k < flat; ++k) acc += w[k] * cur.data[k];
        h[j] = acc > 0.0 ? acc : 0.0;
    }
    return h;
}

std::vector<double> Network::head(std::span<const double> hidden, const DropoutMask* mask) const {
    const auto H = static_cast<std::size_t>(spec_.hidden);
    if (hidden.size() != H) throw std::invalid_argument("hidden activation width mismatch");
    if (mask && mask->keep.size() != H) throw std::invalid_argument("dropout mask width mismatch");
    std::vector<double> z(static_cast<std::size_t>(spec_.classes));
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double* w = &params_[fc2_w_ + c * H];
        double acc = params_[fc2_b_ + c];
        for (std::size_t j = 0; j < H; ++j) acc += w[j] * (mask ? hidden[j] * mask->scale(j) : hidden[j]);
        z[c] = acc;
    }
    softmax_inplace(z);
    return z;
}

std::vector<double> Network::predict(const Tensor& input, bool dropout_active, double rate, Rng& rng) const {
    const auto h = features(input);
    if (!dropout_active) return head(h, nullptr);
    const auto mask = DropoutMask::sample(h.size(), rate, rng);
    return head(h, &mask);
}

double Network::loss_and_gradient(const Tensor& input, int label, const DropoutMask* mask,
                                  std::span<double> grad) const {
    check_input(input);
    if (label < 0 || label >= spec_.classes) throw std::invalid_argument("label out of range");
    const bool want_grad = !grad.empty();
    if (want_grad && grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");

    // Forward, keeping what backward needs.
    const std::size_t B = conv_.size();
    std::vector<Tensor> block_in(B + 1);  // block_in[B] is the flattened pooled output
    std::vector<Tensor> block_z(B);       // post-ReLU conv output
    std::vector<std::vector<std::uint32_t>> argmax(B);
    block_in[0] = input;
    for (std::size_t b = 0; b < B; ++b) {
        const auto& l = conv_[b];
        block_z[b] = Tensor(l.out_channels, l.size, l.size);
        conv3x3(&params_[l.weights], &params_[l.bias], block_in[b], block_z[b]);
        relu_inplace(block_z[b]);
        block_in[b + 1] = maxpool2(block_z[b], &argmax[b]);
    }
    const Tensor& flat = block_in[B];
    const std::size_t F = flat.size();
    const auto H = static_cast<std::size_t>(spec_.hidden);
    const auto C = static_cast<std::size_t>(spec_.classes);

    std::vector<double> h(H), hd(H);
    for (std::size_t j = 0; j < H; ++j) {
        const double* w = &params_[fc1_w_ + j * F];
        double acc = params_[fc1_b_ + j];
        for (std::size_t k = 0; k < F; ++k) acc += w[k] * flat.data[k];
        h[j] = acc > 0.0 ? acc : 0.0;
        hd[j] = mask ? h[j] * mask->scale(j) : h[j];
    }
    std::vector<double> z(C);
    for (std::size_t c = 0; c < C; ++c) {
        const double* w = &params_[fc2_w_ + c * H];
        double acc = params_[fc2_b_ + c];
        for (std::size_t j = 0; j < H; ++j) acc += w[j] * hd[j];
        z[c] = acc;
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    const double loss = mx + std::log(sum) - z[static_cast<std::size_t>(label)];
    if (!want_grad) return loss;

    // Backward.
    std::vector<double> dz(C);
    for (std::size_t c = 0; c < C; ++c) dz[c] = std::exp(z[c] - mx) / sum;
    dz[static_cast<std::size_t>(label)] -= 1.0;

    std::vector<double> dh(H, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        const double* w = &params_[fc2_w_ + c * H];
        double* gw = &grad[fc2_w_ + c * H];
        for (std::size_t j = 0; j < H; ++j) {
            gw[j] += dz[c] * hd[j];
            dh[j] += dz[c] * w[j];
        }
        grad[fc2_b_ + c] += dz[c];
    }
    Tensor dflat(flat.channels, flat.height, flat.width);
    for (std::size_t j = 0; j < H; ++j) {
        double g = mask ? dh[j] * mask->scale(j) : dh[j];
        if (h[j] <= 0.0) g = 0.0;
        if (g == 0.0) continue;
        const double* w = &params_[fc1_w_ + j * F];
        double* gw = &grad[fc1_w_ + j * F];
        for (std::size_t k = 0; k < F; ++k) {
            gw[k] += g * flat.data[k];
            dflat.data[k] += g * w[k];
        }
        grad[fc1_b_ + j] += g;
    }

    Tensor dpooled = std::move(dflat);
    for (std::size_t b = B; b-- > 0;) {
        const auto& l = conv_[b];
        Tensor dconv(l.out_channels, l.size, l.size);
        for (std::size_t o = 0; o < dpooled.size(); ++o) {
            const std::uint32_t src = argmax[b][o];
            if (block_z[b].data[src] > 0.0) dconv.data[src] += dpooled.data[o];
        }
        Tensor din;
        if (b > 0) din = Tensor(l.in_channels, l.size, l.size);
        conv3x3_backward(&params_[l.weights], block_in[b], dconv, &grad[l.weights], &grad[l.bias],
                         b > 0 ? &din : nullptr);
        dpooled = std::move(din);
    }
    return loss;
}

namespace {

constexpr std::string_view kCheckpointMagic = "proteoknight-model";
constexpr int kCheckpointVersion = 1;

}  // namespace

std::string Network::serialize() const {
    std::string out;
    out += std::string(kCheckpointMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
    out += "task " + std::string(task_name(spec_.task)) + "\n";
    out += "input_size " + std::to_string(spec_.input_size) + "\n";
    out += "input_channels " + std::to_string(spec_.input_channels) + "\n";
    out += "conv_channels";
    for (int c : spec_.conv_channels) out += " " + std::to_string(c);
    out += "\n";
    out += "hidden " + std::to_string(spec_.hidden) + "\n";
    out += "classes " + std::to_string(spec_.classes) + "\n";
    out += "parameters " + std::to_string(params_.size()) + "\n";
    for (double v : params_) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

Network Network::deserialize(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = eol + 1;
    }
    auto fail = [](const std::string& why) -> DataError { return DataError("bad model checkpoint: " + why); };
    auto words = [](std::string_view line) {
        std::vector<std::string_view> w;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ') ++j;
            if (j > i) w.push_back(line.substr(i, j - i));
            i = j;
        }
        return w;
    };
    auto to_int = [&](std::string_view s) {
        long long v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw fail("bad integer '" + std::string(s) + "'");
        return v;
    };

    if (lines.empty()) throw fail("empty file");
    const auto magic = words(lines[0]);
    if (magic.size() != 2 || magic[0] != kCheckpointMagic) throw fail("missing header");
    if (to_int(magic[1]) != kCheckpointVersion) throw fail("unsupported version " + std::string(magic[1]));

    NetworkSpec spec;
    spec.conv_channels.clear();
    std::size_t line = 1;
    long long count = -1;
    for (; line < lines.size() && count < 0; ++line) {
        const auto w = words(lines[line]);
        if (w.empty()) continue;
        if (w[0] == "task" && w.size() == 2) {
            if (w[1] == "binary") spec.task = Task::binary;
            else if (w[1] == "multiclass") spec.task = Task::multiclass;
            else throw fail("unknown task");
        } else if (w[0] == "input_size" && w.size() == 2) {
            spec.input_size = static_cast<int>(to_int(w[1]));
        } else if (w[0] == "input_channels" && w.size() == 2) {
            spec.input_channels = static_cast<int>(to_int(w[1]));
        } else if (w[0] == "conv_channels") {
            for (std::size_t k = 1; k < w.size(); ++k) spec.conv_channels.push_back(static_cast<int>(to_int(w[k])));
        } else if (w[0] == "hidden" && w.size() == 2) {
            spec.hidden = static_cast<int>(to_int(w[1]));
        } else if (w[0] == "classes" && w.size() == 2) {
            spec.classes = static_cast<int>(to_int(w[1]));
        } else if (w[0] == "parameters" && w.size() == 2) {
            count = to_int(w[1]);
        } else {
            throw fail("unexpected line '" + std::string(lines[line]) + "'");
        }
    }
    if (count < 0) throw fail("missing parameter block");
    std::vector<double> params;
    params.reserve(static_cast<std::size_t>(count));
    for (; line < lines.size() && params.size() < static_cast<std::size_t>(count); ++line) {
        const std::string_view s = lines[line];
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
            throw fail("bad parameter on line " + std::to_string(line + 1));
        params.push_back(v);
    }
    if (params.size() != static_cast<std::size_t>(count)) throw fail("truncated parameter block");
    try {
        return Network(std::move(spec), std::move(params));
    } catch (const std::invalid_argument& e) {
        throw fail(e.what());
    }
}

void Network::save(const std::string& path) const { write_text_file(path, serialize()); }

Network Network::load(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return deserialize(text);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void TrainConfig::validate() const {
    if (epochs < 0 || batch_size <= 0 || !(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw std::invalid_argument("training hyperparameters must be non-negative (batch size positive)");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout rate must lie in [0, 1)");
}

double dataset_loss(const Network& net, const std::vector<Sample>& data) {
    if (data.empty()) return 0.0;
    double total = 0.0;
    for (const auto& s : data) total += net.loss_and_gradient(s.input, s.label, nullptr, {});
    return total / static_cast<double>(data.size());
}

double dataset_accuracy(const Network& net, const std::vector<Sample>& data) {
    if (data.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& s : data) {
        const auto p = net.predict(s.input);
        const auto best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
        hits += best == s.label;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainReport train(Network& net, const std::vector<Sample>& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw std::invalid_argument("training set is empty");
    for (const auto& s : data) {
        net.check_input(s.input);
        if (s.label < 0 || s.label >= net.spec().classes) throw std::invalid_argument("label out of range");
    }

    auto checked_loss = [&](int epoch) {
        const double l = dataset_loss(net, data);
        if (!std::isfinite(l))
            throw TrainingDiverged("training diverged: non-finite loss after epoch " + std::to_string(epoch) +
                                   " (learning rate " + std::to_string(cfg.learning_rate) + ")");
        return l;
    };

    TrainReport report;
    report.loss_history.push_back(checked_loss(0));

    Rng rng(derive_seed(cfg.seed, "train"));
    auto params = net.parameters();
    const std::size_t P = params.size();
    std::vector<double> grad(P), m(P, 0.0), v(P, 0.0);
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-7;
    std::uint64_t step = 0;

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto hidden = static_cast<std::size_t>(net.spec().hidden);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const auto& s = data[order[k]];
                const auto mask = DropoutMask::sample(hidden, cfg.dropout, rng);
                batch_loss += net.loss_and_gradient(s.input, s.label, &mask, grad);
            }
            if (!std::isfinite(batch_loss))
                throw TrainingDiverged("training diverged: non-finite batch loss in epoch " + std::to_string(epoch));
            const double inv = 1.0 / static_cast<double>(end - start);
            ++step;
            if (cfg.optimizer == TrainConfig::Optimizer::sgd) {
                for (std::size_t i = 0; i < P; ++i) params[i] -= cfg.learning_rate * grad[i] * inv;
            } else {
                const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
                for (std::size_t i = 0; i < P; ++i) {
                    const double g = grad[i] * inv;
                    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                    v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                    params[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
                }
            }
        }
        report.loss_history.push_back(checked_loss(epoch));
    }
    report.train_accuracy = dataset_accuracy(net, data);
    return report;
}

}  // namespace proteoknight
