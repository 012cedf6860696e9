#include "restrictml/cnn.hpp"

#include <algorithm>
#include <cmath>

#include "restrictml/rng.hpp"

namespace restrictml {

namespace {

double softplus(double x) {
    // max(x,0) + log1p(exp(-|x|)) avoids overflow on both tails
    return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::size_t pad_left(std::size_t in_len, std::size_t out_len, std::size_t kernel,
                     std::size_t stride) {
    const std::size_t needed = (out_len - 1) * stride + kernel;
    const std::size_t total = needed > in_len ? needed - in_len : 0;
    return total / 2;  // the odd column pads the right
}

// Activations of one sample as (length x channels) planes.
struct ForwardCache {
    std::vector<double> input;  // width x 1
    Matrix z1, a1;              // conv1_len x filters
    Matrix z2;                  // conv2_len x filters (linear: a2 == z2)
    Matrix drop_scale;          // conv2_len x filters; 1/(keep) or 0
    Matrix dropped;             // z2 * drop_scale (identity at inference)
    Matrix pooled;              // pool_len x filters
    std::vector<std::int32_t> pool_from;  // source row per pooled cell
    std::vector<double> flat;
    std::vector<double> dense1;
    std::vector<double> logits;
    std::vector<double> probs;
};

void conv1d_forward(const Conv1dSpec& conv, const Matrix& weights,
                    const std::vector<double>& bias, const Matrix& in, Matrix& z) {
    const std::size_t in_len = in.rows;
    const std::size_t in_ch = in.cols;
    const std::size_t out_len = NetworkSpec::ceil_div(in_len, conv.stride);
    const std::size_t left = pad_left(in_len, out_len, conv.kernel, conv.stride);

    z = Matrix(out_len, conv.filters);
    for (std::size_t t = 0; t < out_len; ++t) {
        for (std::size_t f = 0; f < conv.filters; ++f) {
            double acc = bias[f];
            for (std::size_t c = 0; c < in_ch; ++c) {
                for (std::size_t j = 0; j < conv.kernel; ++j) {
                    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t * conv.stride + j) -
                                               static_cast<std::ptrdiff_t>(left);
                    if (src < 0 || src >= static_cast<std::ptrdiff_t>(in_len)) continue;
                    acc += weights.at(f, c * conv.kernel + j) *
                           in.at(static_cast<std::size_t>(src), c);
                }
            }
            z.at(t, f) = acc;
        }
    }
}

void conv1d_backward(const Conv1dSpec& conv, const Matrix& weights, const Matrix& in,
                     const Matrix& dz, Matrix& dweights, std::vector<double>& dbias,
                     Matrix* din) {
    const std::size_t in_len = in.rows;
    const std::size_t in_ch = in.cols;
    const std::size_t out_len = dz.rows;
    const std::size_t left = pad_left(in_len, out_len, conv.kernel, conv.stride);

    for (std::size_t t = 0; t < out_len; ++t) {
        for (std::size_t f = 0; f < conv.filters; ++f) {
            const double g = dz.at(t, f);
            if (g == 0.0) continue;
            dbias[f] += g;
            for (std::size_t c = 0; c < in_ch; ++c) {
                for (std::size_t j = 0; j < conv.kernel; ++j) {
                    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t * conv.stride + j) -
                                               static_cast<std::ptrdiff_t>(left);
                    if (src < 0 || src >= static_cast<std::ptrdiff_t>(in_len)) continue;
                    dweights.at(f, c * conv.kernel + j) +=
                        g * in.at(static_cast<std::size_t>(src), c);
                    if (din != nullptr) {
                        din->at(static_cast<std::size_t>(src), c) +=
                            g * weights.at(f, c * conv.kernel + j);
                    }
                }
            }
        }
    }
}

// Forward pass for one sample.  When `mask_rng` is null, dropout is the
// identity (inference mode).
void forward_sample(const NetworkState& state, std::span<const double> sample,
                    Rng* mask_rng, ForwardCache& cache) {
    const NetworkSpec& spec = state.spec;
    cache.input.assign(sample.begin(), sample.end());
    const Matrix input(spec.input_width, 1,
                       std::vector<double>(sample.begin(), sample.end()));

    conv1d_forward(spec.conv1, state.w_conv1, state.b_conv1, input, cache.z1);
    cache.a1 = cache.z1;
    for (double& v : cache.a1.data) v = softplus(v);

    conv1d_forward(spec.conv2, state.w_conv2, state.b_conv2, cache.a1, cache.z2);

    cache.drop_scale = Matrix(cache.z2.rows, cache.z2.cols);
    if (mask_rng != nullptr && spec.dropout_rate > 0.0) {
        const double keep = 1.0 - spec.dropout_rate;
        for (double& s : cache.drop_scale.data) {
            s = mask_rng->uniform() < keep ? 1.0 / keep : 0.0;
        }
    } else {
        std::fill(cache.drop_scale.data.begin(), cache.drop_scale.data.end(), 1.0);
    }
    cache.dropped = cache.z2;
    for (std::size_t i = 0; i < cache.dropped.data.size(); ++i) {
        cache.dropped.data[i] *= cache.drop_scale.data[i];
    }

    const std::size_t pool_len = spec.pool_length();
    cache.pooled = Matrix(pool_len, spec.conv2.filters);
    cache.pool_from.assign(pool_len * spec.conv2.filters, 0);
    for (std::size_t t = 0; t < pool_len; ++t) {
        for (std::size_t c = 0; c < spec.conv2.filters; ++c) {
            std::size_t best = t * spec.pool_size;
            double value = cache.dropped.at(best, c);
            for (std::size_t j = 1; j < spec.pool_size; ++j) {
                const std::size_t row = t * spec.pool_size + j;
                if (row >= cache.dropped.rows) break;
                if (cache.dropped.at(row, c) > value) {  // first max wins ties
                    value = cache.dropped.at(row, c);
                    best = row;
                }
            }
            cache.pooled.at(t, c) = value;
            cache.pool_from[t * spec.conv2.filters + c] = static_cast<std::int32_t>(best);
        }
    }

    cache.flat.assign(cache.pooled.data.begin(), cache.pooled.data.end());

    cache.dense1.assign(spec.dense_units, 0.0);
    for (std::size_t u = 0; u < spec.dense_units; ++u) {
        double acc = state.b_dense1[u];
        for (std::size_t i = 0; i < cache.flat.size(); ++i) {
            acc += state.w_dense1.at(u, i) * cache.flat[i];
        }
        cache.dense1[u] = acc;
    }

    cache.logits.assign(spec.classes, 0.0);
    for (std::size_t k = 0; k < spec.classes; ++k) {
        double acc = state.b_dense2[k];
        for (std::size_t u = 0; u < spec.dense_units; ++u) {
            acc += state.w_dense2.at(k, u) * cache.dense1[u];
        }
        cache.logits[k] = acc;
    }

    const double peak = *std::max_element(cache.logits.begin(), cache.logits.end());
    double total = 0.0;
    cache.probs.assign(spec.classes, 0.0);
    for (std::size_t k = 0; k < spec.classes; ++k) {
        cache.probs[k] = std::exp(cache.logits[k] - peak);
        total += cache.probs[k];
    }
    for (double& p : cache.probs) p /= total;
}

double cross_entropy(const ForwardCache& cache, int label) {
    const double peak = *std::max_element(cache.logits.begin(), cache.logits.end());
    double total = 0.0;
    for (const double z : cache.logits) total += std::exp(z - peak);
    return -(cache.logits[static_cast<std::size_t>(label)] - peak - std::log(total));
}

double activity_l1_sum(const ForwardCache& cache) {
    double sum = 0.0;
    for (const double a : cache.a1.data) sum += std::fabs(a);
    return sum;
}

struct Gradients {
    Matrix w_conv1;
    std::vector<double> b_conv1;
    Matrix w_conv2;
    std::vector<double> b_conv2;
    Matrix w_dense1;
    std::vector<double> b_dense1;
    Matrix w_dense2;
    std::vector<double> b_dense2;

    explicit Gradients(const NetworkState& state)
        : w_conv1(state.w_conv1.rows, state.w_conv1.cols),
          b_conv1(state.b_conv1.size(), 0.0),
          w_conv2(state.w_conv2.rows, state.w_conv2.cols),
          b_conv2(state.b_conv2.size(), 0.0),
          w_dense1(state.w_dense1.rows, state.w_dense1.cols),
          b_dense1(state.b_dense1.size(), 0.0),
          w_dense2(state.w_dense2.rows, state.w_dense2.cols),
          b_dense2(state.b_dense2.size(), 0.0) {}
};

template <typename State>
auto tensor_views(State& s) {
    using Value = std::conditional_t<std::is_const_v<State>, const double, double>;
    std::vector<std::span<Value>> views;
    views.push_back({s.w_conv1.data.data(), s.w_conv1.data.size()});
    views.push_back({s.b_conv1.data(), s.b_conv1.size()});
    views.push_back({s.w_conv2.data.data(), s.w_conv2.data.size()});
    views.push_back({s.b_conv2.data(), s.b_conv2.size()});
    views.push_back({s.w_dense1.data.data(), s.w_dense1.data.size()});
    views.push_back({s.b_dense1.data(), s.b_dense1.size()});
    views.push_back({s.w_dense2.data.data(), s.w_dense2.data.size()});
    views.push_back({s.b_dense2.data(), s.b_dense2.size()});
    return views;
}

// Accumulates one sample's gradient of (cross-entropy + activity L1) / batch.
// The kernel L2 term is added once per batch by the caller.
void backward_sample(const NetworkState& state, const ForwardCache& cache, int label,
                     double inv_batch, Gradients& grads) {
    const NetworkSpec& spec = state.spec;

    std::vector<double> dlogits(cache.probs);
    dlogits[static_cast<std::size_t>(label)] -= 1.0;
    for (double& g : dlogits) g *= inv_batch;

    std::vector<double> ddense1(spec.dense_units, 0.0);
    for (std::size_t k = 0; k < spec.classes; ++k) {
        grads.b_dense2[k] += dlogits[k];
        for (std::size_t u = 0; u < spec.dense_units; ++u) {
            grads.w_dense2.at(k, u) += dlogits[k] * cache.dense1[u];
            ddense1[u] += dlogits[k] * state.w_dense2.at(k, u);
        }
    }

    std::vector<double> dflat(cache.flat.size(), 0.0);
    for (std::size_t u = 0; u < spec.dense_units; ++u) {
        grads.b_dense1[u] += ddense1[u];
        for (std::size_t i = 0; i < cache.flat.size(); ++i) {
            grads.w_dense1.at(u, i) += ddense1[u] * cache.flat[i];
            dflat[i] += ddense1[u] * state.w_dense1.at(u, i);
        }
    }

    // unpool then undo the dropout scaling
    Matrix dz2(cache.z2.rows, cache.z2.cols);
    for (std::size_t t = 0; t < cache.pooled.rows; ++t) {
        for (std::size_t c = 0; c < cache.pooled.cols; ++c) {
            const std::size_t src =
                static_cast<std::size_t>(cache.pool_from[t * cache.pooled.cols + c]);
            dz2.at(src, c) += dflat[t * cache.pooled.cols + c] * cache.drop_scale.at(src, c);
        }
    }

    Matrix da1(cache.a1.rows, cache.a1.cols);
    conv1d_backward(spec.conv2, state.w_conv2, cache.a1, dz2, grads.w_conv2,
                    grads.b_conv2, &da1);

    // conv1 activity regularizer: d(l1 * sum|a1| / batch)
    const double l1 = spec.activity_l1 * inv_batch;
    for (std::size_t i = 0; i < da1.data.size(); ++i) {
        const double a = cache.a1.data[i];
        da1.data[i] += a > 0.0 ? l1 : (a < 0.0 ? -l1 : 0.0);
    }

    Matrix dz1 = da1;
    for (std::size_t i = 0; i < dz1.data.size(); ++i) {
        dz1.data[i] *= sigmoid(cache.z1.data[i]);  // softplus'
    }

    const Matrix input(spec.input_width, 1, cache.input);
    conv1d_backward(spec.conv1, state.w_conv1, input, dz1, grads.w_conv1, grads.b_conv1,
                    nullptr);
}

void add_kernel_l2_gradient(const NetworkState& state, Gradients& grads) {
    const double scale = 2.0 * state.spec.kernel_l2;
    for (std::size_t i = 0; i < state.w_conv1.data.size(); ++i) {
        grads.w_conv1.data[i] += scale * state.w_conv1.data[i];
    }
}

double kernel_l2_penalty(const NetworkState& state) {
    double sum = 0.0;
    for (const double w : state.w_conv1.data) sum += w * w;
    return state.spec.kernel_l2 * sum;
}

void check_width(const NetworkSpec& spec, const Matrix& batch) {
    if (batch.cols != spec.input_width) {
        throw ValueError("network expects width " + std::to_string(spec.input_width) +
                         ", got " + std::to_string(batch.cols));
    }
}

}  // namespace

std::vector<std::size_t> net_shape_trace(const NetworkSpec& spec) {
    return {spec.conv1_length(), spec.conv2_length(), spec.pool_length(),
            spec.flatten_length(), spec.dense_units, spec.classes};
}

NetworkState net_build(const NetworkSpec& spec, std::uint64_t seed) {
    if (spec.input_width < 1) {
        throw ValueError("input width must be >= 1");
    }
    NetworkState state;
    state.spec = spec;
    state.rng_seed = seed;
    Rng rng(seed);

    auto glorot = [&rng](Matrix& w, std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& v : w.data) v = rng.uniform(-limit, limit);
    };

    state.w_conv1 = Matrix(spec.conv1.filters, 1 * spec.conv1.kernel);
    glorot(state.w_conv1, spec.conv1.kernel, spec.conv1.filters * spec.conv1.kernel);
    state.b_conv1.assign(spec.conv1.filters, 0.0);

    state.w_conv2 = Matrix(spec.conv2.filters, spec.conv1.filters * spec.conv2.kernel);
    glorot(state.w_conv2, spec.conv1.filters * spec.conv2.kernel,
           spec.conv2.filters * spec.conv2.kernel);
    state.b_conv2.assign(spec.conv2.filters, 0.0);

    state.w_dense1 = Matrix(spec.dense_units, spec.flatten_length());
    glorot(state.w_dense1, spec.flatten_length(), spec.dense_units);
    state.b_dense1.assign(spec.dense_units, 0.0);

    state.w_dense2 = Matrix(spec.classes, spec.dense_units);
    glorot(state.w_dense2, spec.dense_units, spec.classes);
    state.b_dense2.assign(spec.classes, 0.0);
    return state;
}

NetworkState net_build(std::size_t input_width, std::uint64_t seed) {
    NetworkSpec spec;
    spec.input_width = input_width;
    return net_build(spec, seed);
}

Matrix forward(const NetworkState& state, const Matrix& batch, bool training,
               std::uint64_t dropout_seed) {
    check_width(state.spec, batch);
    Rng mask_rng(dropout_seed);
    Matrix out(batch.rows, state.spec.classes);
    ForwardCache cache;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        forward_sample(state, batch.row(r), training ? &mask_rng : nullptr, cache);
        std::copy(cache.probs.begin(), cache.probs.end(), out.row(r).begin());
    }
    return out;
}

double loss(const NetworkState& state, const Matrix& batch,
            const std::vector<int>& labels) {
    check_width(state.spec, batch);
    if (batch.rows == 0 || batch.rows != labels.size()) {
        throw ValueError("loss: batch and labels must align and be nonempty");
    }
    double ce = 0.0;
    double l1 = 0.0;
    ForwardCache cache;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        forward_sample(state, batch.row(r), nullptr, cache);
        ce += cross_entropy(cache, labels[r]);
        l1 += activity_l1_sum(cache);
    }
    const double inv = 1.0 / static_cast<double>(batch.rows);
    return ce * inv + kernel_l2_penalty(state) + state.spec.activity_l1 * l1 * inv;
}

std::vector<int> net_predict(const NetworkState& state, const Matrix& batch) {
    const Matrix probs = forward(state, batch, false);
    std::vector<int> labels(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        labels[r] = probs.at(r, 1) > probs.at(r, 0) ? 1 : 0;
    }
    return labels;
}

namespace {

class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, const std::vector<std::span<double>>& params)
        : cfg_(cfg) {
        for (const auto& p : params) {
            m_.emplace_back(p.size(), 0.0);
            v_.emplace_back(p.size(), 0.0);
        }
    }

    void step(const std::vector<std::span<double>>& params,
              const std::vector<std::span<const double>>& grads) {
        ++t_;
        if (cfg_.optimizer == TrainConfig::Optimizer::Adam) {
            constexpr double kBeta1 = 0.9;
            constexpr double kBeta2 = 0.999;
            constexpr double kEps = 1e-8;
            const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
            const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
            for (std::size_t p = 0; p < params.size(); ++p) {
                for (std::size_t i = 0; i < params[p].size(); ++i) {
                    const double g = grads[p][i];
                    m_[p][i] = kBeta1 * m_[p][i] + (1.0 - kBeta1) * g;
                    v_[p][i] = kBeta2 * v_[p][i] + (1.0 - kBeta2) * g * g;
                    params[p][i] -= cfg_.learning_rate * (m_[p][i] / corr1) /
                                    (std::sqrt(v_[p][i] / corr2) + kEps);
                }
            }
        } else {
            for (std::size_t p = 0; p < params.size(); ++p) {
                for (std::size_t i = 0; i < params[p].size(); ++i) {
                    m_[p][i] = cfg_.momentum * m_[p][i] - cfg_.learning_rate * grads[p][i];
                    params[p][i] += m_[p][i];
                }
            }
        }
    }

private:
    TrainConfig cfg_;
    std::size_t t_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

double accuracy(const NetworkState& state, const Matrix& x, const std::vector<int>& y,
                const std::vector<std::size_t>& rows) {
    if (rows.empty()) return 0.0;
    ForwardCache cache;
    std::size_t correct = 0;
    for (const std::size_t r : rows) {
        forward_sample(state, x.row(r), nullptr, cache);
        const int guess = cache.probs[1] > cache.probs[0] ? 1 : 0;
        if (guess == y[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace

TrainLog train(NetworkState& state, const Matrix& x, const std::vector<int>& y,
               const TrainConfig& cfg) {
    check_width(state.spec, x);
    if (x.rows == 0 || x.rows != y.size()) {
        throw ValueError("train: rows and labels must align and be nonempty");
    }
    if (cfg.learning_rate <= 0.0) {
        throw ValueError("train: learning rate must be positive");
    }
    if (cfg.batch_size < 1) {
        throw ValueError("train: batch size must be >= 1");
    }

    std::vector<std::size_t> order(x.rows);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    // Deterministic validation carve-out from the tail of a seeded shuffle.
    std::vector<std::size_t> train_rows = order;
    std::vector<std::size_t> val_rows;
    const auto n_val = static_cast<std::size_t>(
        static_cast<double>(x.rows) * std::clamp(cfg.validation_fraction, 0.0, 0.5));
    if (n_val > 0) {
        Rng split_rng(cfg.seed, 0x76616c73ull);  // distinct stream for the split
        split_rng.shuffle(train_rows);
        val_rows.assign(train_rows.end() - static_cast<std::ptrdiff_t>(n_val),
                        train_rows.end());
        train_rows.resize(train_rows.size() - n_val);
    }

    auto params = tensor_views(state);
    Optimizer optimizer(cfg, params);

    TrainLog log;
    double best_val = -1.0;
    std::size_t stale = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng epoch_rng(cfg.seed, epoch);
        epoch_rng.shuffle(train_rows);

        ForwardCache cache;
        for (std::size_t start = 0; start < train_rows.size();
             start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, train_rows.size());
            const double inv_batch = 1.0 / static_cast<double>(stop - start);

            Gradients grads(state);
            for (std::size_t i = start; i < stop; ++i) {
                const std::size_t r = train_rows[i];
                forward_sample(state, x.row(r), &epoch_rng, cache);
                backward_sample(state, cache, y[r], inv_batch, grads);
            }
            add_kernel_l2_gradient(state, grads);

            const Gradients& g = grads;
            optimizer.step(params, tensor_views(g));
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = [&] {
            Matrix sub(train_rows.size(), x.cols);
            std::vector<int> suby(train_rows.size());
            for (std::size_t i = 0; i < train_rows.size(); ++i) {
                std::copy(x.row(train_rows[i]).begin(), x.row(train_rows[i]).end(),
                          sub.row(i).begin());
                suby[i] = y[train_rows[i]];
            }
            return loss(state, sub, suby);
        }();
        stats.train_acc = accuracy(state, x, y, train_rows);
        stats.val_acc = val_rows.empty() ? stats.train_acc
                                         : accuracy(state, x, y, val_rows);
        log.epochs.push_back(stats);

        if (!val_rows.empty() && cfg.early_stop_patience > 0) {
            if (stats.val_acc > best_val) {
                best_val = stats.val_acc;
                stale = 0;
            } else if (++stale >= cfg.early_stop_patience) {
                break;
            }
        }
    }
    return log;
}

double gradient_check(const NetworkState& state, std::span<const double> sample,
                      int label, double epsilon) {
    if (epsilon <= 0.0) {
        throw ValueError("gradient_check: epsilon must be positive");
    }
    NetworkState work = state;
    const Matrix batch(1, work.spec.input_width,
                       std::vector<double>(sample.begin(), sample.end()));
    const std::vector<int> labels{label};

    // Analytic gradients of the full loss, dropout off.
    ForwardCache cache;
    forward_sample(work, batch.row(0), nullptr, cache);
    Gradients grads(work);
    backward_sample(work, cache, label, 1.0, grads);
    add_kernel_l2_gradient(work, grads);

    auto params = tensor_views(work);
    const Gradients& g = grads;
    auto grad_views = tensor_views(g);

    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].size(); ++i) {
            const double saved = params[p][i];
            params[p][i] = saved + epsilon;
            const double up = loss(work, batch, labels);
            params[p][i] = saved - epsilon;
            const double down = loss(work, batch, labels);
            params[p][i] = saved;

            const double numeric = (up - down) / (2.0 * epsilon);
            const double analytic = grad_views[p][i];
            const double magnitude = std::max(std::fabs(numeric), std::fabs(analytic));
            if (magnitude < 1e-8) continue;  // absolute fallback for dead regions
            worst = std::max(worst, std::fabs(numeric - analytic) / magnitude);
        }
    }
    return worst;
}

}  // namespace restrictml
