#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "restrictml/matrix.hpp"

namespace restrictml {

enum class Activation { Linear, Softplus };

struct Conv1dSpec {
    std::size_t filters = 64;
    std::size_t kernel = 3;
    std::size_t stride = 3;
    Activation activation = Activation::Linear;
};

// The fixed network stack: Conv1D -> Conv1D -> Dropout -> MaxPool1D ->
// Flatten -> Dense -> Dense(softmax).  Sizes are parameterized so tests
// can run scaled-down instances; kDefault* values describe the production
// configuration.
struct NetworkSpec {
    std::size_t input_width = 24;
    Conv1dSpec conv1{64, 3, 3, Activation::Softplus};
    Conv1dSpec conv2{64, 3, 3, Activation::Linear};
    double dropout_rate = 0.5;
    std::size_t pool_size = 2;
    std::size_t dense_units = 128;
    std::size_t classes = 2;
    double kernel_l2 = 0.01;    // conv1 kernel regularizer
    double activity_l1 = 0.01;  // conv1 activity regularizer

    // "Same" padding with stride s: output length ceil(L/s), zero padding
    // split evenly with the extra column on the right.
    std::size_t conv1_length() const { return ceil_div(input_width, conv1.stride); }
    std::size_t conv2_length() const { return ceil_div(conv1_length(), conv2.stride); }
    std::size_t pool_length() const { return ceil_div(conv2_length(), pool_size); }
    std::size_t flatten_length() const { return pool_length() * conv2.filters; }

    static std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }
};

// Per-layer output widths: [conv1, conv2, pool, flatten, dense, classes].
std::vector<std::size_t> net_shape_trace(const NetworkSpec& spec);

// Weight matrices are (output unit) x (input); conv kernels flatten the
// (channel, tap) axes as channel * kernel + tap.
struct NetworkState {
    NetworkSpec spec;
    Matrix w_conv1;
    std::vector<double> b_conv1;
    Matrix w_conv2;
    std::vector<double> b_conv2;
    Matrix w_dense1;
    std::vector<double> b_dense1;
    Matrix w_dense2;
    std::vector<double> b_dense2;
    std::uint64_t rng_seed = 0;
};

// Seeded Glorot-uniform initialization; biases start at zero.
NetworkState net_build(const NetworkSpec& spec, std::uint64_t seed);
NetworkState net_build(std::size_t input_width, std::uint64_t seed);

// Class probability rows (softmax).  Dropout masks apply only when
// training=true and are drawn deterministically from dropout_seed.
Matrix forward(const NetworkState& state, const Matrix& batch, bool training,
               std::uint64_t dropout_seed = 0);

// Mean cross-entropy plus the conv1 regularizers (kernel L2 summed once,
// activity L1 averaged over the batch).  Dropout is inactive.
double loss(const NetworkState& state, const Matrix& batch,
            const std::vector<int>& labels);

std::vector<int> net_predict(const NetworkState& state, const Matrix& batch);

struct TrainConfig {
    enum class Optimizer { Adam, Sgd };
    Optimizer optimizer = Optimizer::Adam;
    double learning_rate = 1e-3;
    double momentum = 0.9;  // sgd only
    std::size_t batch_size = 32;
    std::size_t epochs = 30;
    std::uint64_t seed = 0;
    // Fraction of rows carved off (seeded) for the validation column and
    // plateau-based early stopping; 0 disables both and the epoch log
    // repeats the training accuracy in the val_acc column.
    double validation_fraction = 0.1;
    std::size_t early_stop_patience = 5;
};

struct EpochStats {
    std::size_t epoch = 0;
    double loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
};

struct TrainLog {
    std::vector<EpochStats> epochs;
};

// Mini-batch backprop; bitwise deterministic for a given config seed
// (shuffles, dropout masks, and initialization all derive from it).
TrainLog train(NetworkState& state, const Matrix& x, const std::vector<int>& y,
               const TrainConfig& cfg);

// Central finite differences of the full loss against the analytic
// gradients, dropout disabled.  Returns the max relative error over all
// parameters; parameters where both gradients are below 1e-8 in magnitude
// are compared absolutely.
double gradient_check(const NetworkState& state, std::span<const double> sample,
                      int label, double epsilon);

}  // namespace restrictml
