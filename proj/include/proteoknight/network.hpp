#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proteoknight/image.hpp"
#include "proteoknight/rng.hpp"

namespace proteoknight {

// Channel-major (C, H, W) double tensor.
struct Tensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int c, int h, int w)
        : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, 0.0) {}

    std::size_t size() const noexcept { return data.size(); }
    double& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
    double at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

// Area-average downsampling of an RGB image to side x side, scaled to [0, 1].
// Each output pixel is the coverage-weighted mean of the source pixels its
// footprint overlaps, so any source size works.
Tensor image_to_input(const Image& image, int side);

enum class Task : std::uint8_t { binary, multiclass };

std::string_view task_name(Task t) noexcept;

// conv3x3(same) -> ReLU -> maxpool2 blocks, then dense -> ReLU -> dropout ->
// dense -> softmax. Dropout is the only stochastic layer and sits after all
// the deterministic feature extraction.
struct NetworkSpec {
    int input_size = 64;
    int input_channels = 3;
    std::vector<int> conv_channels = {8, 16};
    int hidden = 64;
    int classes = 2;
    Task task = Task::binary;

    void validate() const;
    int flat_features() const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// Per-unit keep indicators for the dropout layer.
struct DropoutMask {
    std::vector<std::uint8_t> keep;
    double rate = 0.0;

    // Keep each of `units` with probability 1 - rate.
    static DropoutMask sample(std::size_t units, double rate, Rng& rng);
    // Inverted-dropout multiplier for unit i: keep / (1 - rate).
    double scale(std::size_t i) const noexcept {
        return keep[i] ? 1.0 / (1.0 - rate) : 0.0;
    }
};

class Network {
public:
    // Uniform(-sqrt(6/fan_in), +sqrt(6/fan_in)) weights, zero biases.
    Network(NetworkSpec spec, std::uint64_t seed);

    const NetworkSpec& spec() const noexcept { return spec_; }
    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }
    std::size_t parameter_count() const noexcept { return params_.size(); }

    // Post-ReLU hidden activations; everything before the dropout layer.
    std::vector<double> features(const Tensor& input) const;
    // Softmax output from hidden activations; `mask` may be null (no dropout).
    std::vector<double> head(std::span<const double> hidden, const DropoutMask* mask) const;

    std::vector<double> predict(const Tensor& input) const { return head(features(input), nullptr); }
    // Stochastic pass with a fresh mask at `rate` when dropout_active.
    std::vector<double> predict(const Tensor& input, bool dropout_active, double rate, Rng& rng) const;

    // Cross-entropy of one sample; accumulates d(loss)/d(params) into grad
    // when non-empty.
    double loss_and_gradient(const Tensor& input, int label, const DropoutMask* mask,
                             std::span<double> grad) const;

    void check_input(const Tensor& input) const;

    // Versioned text checkpoint: architecture lines, then one parameter per line.
    std::string serialize() const;
    static Network deserialize(std::string_view text);
    void save(const std::string& path) const;
    static Network load(const std::string& path);

private:
    struct ConvLayer {
        int in_channels, out_channels, size;  // size = input side
        std::size_t weights, bias;            // offsets into params_
    };

    Network(NetworkSpec spec, std::vector<double> params);
    void layout();

    NetworkSpec spec_;
    std::vector<ConvLayer> conv_;
    std::size_t fc1_w_ = 0, fc1_b_ = 0, fc2_w_ = 0, fc2_b_ = 0;
    std::vector<double> params_;
};

struct Sample {
    Tensor input;
    int label = 0;
};

struct TrainConfig {
    int epochs = 25;
    int batch_size = 32;
    double learning_rate = 0.001;
    double dropout = 0.2;  // training-time rate
    enum class Optimizer : std::uint8_t { sgd, adam } optimizer = Optimizer::sgd;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainReport {
    // loss_history[0] is the loss at initialisation, [e] after epoch e; all
    // measured over the full training set with dropout off.
    std::vector<double> loss_history;
    double train_accuracy = 0.0;
};

class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mini-batch training in place. Throws TrainingDiverged on a non-finite loss.
TrainReport train(Network& net, const std::vector<Sample>& data, const TrainConfig& cfg);

double dataset_loss(const Network& net, const std::vector<Sample>& data);
double dataset_accuracy(const Network& net, const std::vector<Sample>& data);

}  // namespace proteoknight
