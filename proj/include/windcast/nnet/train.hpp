#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/nnet/network.hpp"
#include "windcast/rng.hpp"

namespace windcast::nnet {

struct TrainConfig {
    int batch_size = 64;
    int max_epochs = 500;
    int patience = 15;
    bool restore_best = true;
    double learning_rate = 0.0;  // 0: use the spec's optimizer rate
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
        if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
        if (patience < 1) throw ConfigError("train: patience must be >= 1");
        if (learning_rate < 0.0) throw ConfigError("train: learning_rate must be >= 0");
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"batch_size", batch_size},       {"max_epochs", max_epochs},
                              {"patience", patience},           {"restore_best", restore_best},
                              {"learning_rate", learning_rate}, {"rng_seed", rng_seed}};
    }

    static TrainConfig from_json(const nlohmann::json& j) {
        TrainConfig c;
        c.batch_size = j.value("batch_size", c.batch_size);
        c.max_epochs = j.value("max_epochs", c.max_epochs);
        c.patience = j.value("patience", c.patience);
        c.restore_best = j.value("restore_best", c.restore_best);
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.rng_seed = j.value("rng_seed", c.rng_seed);
        return c;
    }
};

// Standard Adam with bias correction. Frozen parameter segments are never
// touched, so they stay bit-identical through any number of steps.
class Adam {
public:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads, double lr,
              const std::vector<std::pair<std::size_t, std::size_t>>& active_ranges) {
        if (params.size() != m_.size() || grads.size() != m_.size())
            throw InputError("adam: size mismatch");
        ++t_;
        const double corr1 = 1.0 - std::pow(kBeta1, t_);
        const double corr2 = 1.0 - std::pow(kBeta2, t_);
        for (const auto& [off, count] : active_ranges) {
            for (std::size_t i = off; i < off + count; ++i) {
                m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grads[i];
                v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grads[i] * grads[i];
                const double mhat = m_[i] / corr1;
                const double vhat = v_[i] / corr2;
                params[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
            }
        }
    }

    void step(std::vector<double>& params, const std::vector<double>& grads, double lr) {
        step(params, grads, lr, {{0, params.size()}});
    }

    std::int64_t steps_taken() const { return t_; }

private:
    std::vector<double> m_, v_;
    std::int64_t t_ = 0;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = -1;  // 0-based index into history
    double best_val_loss = 0.0;
    bool stopped_early = false;
};

inline nlohmann::json history_to_json(const std::vector<EpochStats>& h) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : h) j.push_back({{"train_loss", e.train_loss}, {"val_loss", e.val_loss}});
    return j;
}

namespace detail {

// Parameter ranges Adam may update: everything outside frozen layers.
inline std::vector<std::pair<std::size_t, std::size_t>> active_ranges(const Network& net) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& segs = net.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (net.is_frozen(i) || segs[i].count == 0) continue;
        if (!out.empty() && out.back().first + out.back().second == segs[i].offset)
            out.back().second += segs[i].count;  // merge adjacent
        else
            out.emplace_back(segs[i].offset, segs[i].count);
    }
    return out;
}

}  // namespace detail

// Mini-batch Adam with early stopping on validation MSE.
//
// RNG substreams of cfg.rng_seed: 0 init (skipped when the network arrives
// pre-initialized), 1 epoch shuffling, 2 dropout masks. Epoch train loss is
// the batch-size-weighted mean of training-mode batch losses; val loss is a
// full inference-mode pass. Improvement is strict (<). With restore_best
// the best epoch's parameters and batchnorm statistics are restored at the
// end.
inline TrainResult train_network(Network& net, const Array3& train_x, const Array3& train_y,
                                 const Array3& val_x, const Array3& val_y, const TrainConfig& cfg,
                                 bool params_preinitialized = false) {
    cfg.validate();
    if (train_x.b < 1 || val_x.b < 1) throw InputError("train: empty train or validation set");
    if (train_x.b != train_y.b || val_x.b != val_y.b)
        throw InputError("train: feature/target batch size mismatch");
    const double lr = cfg.learning_rate > 0.0 ? cfg.learning_rate : net.spec().learning_rate;
    if (!(lr > 0.0)) throw ConfigError("train: learning rate must be > 0");

    if (!params_preinitialized) net.init_params(derive_seed(cfg.rng_seed, 0));
    Rng shuffle_rng(derive_seed(cfg.rng_seed, 1));
    Rng dropout_rng(derive_seed(cfg.rng_seed, 2));

    Adam adam(net.param_count());
    const auto active = detail::active_ranges(net);

    const Shape out_shape = net.output_shape();
    const int per_sample = out_shape.l * out_shape.c;
    if (train_y.l * train_y.c != per_sample)
        throw InputError("train: target shape does not match network output");

    std::vector<int> order(static_cast<std::size_t>(train_x.b));
    for (int i = 0; i < train_x.b; ++i) order[static_cast<std::size_t>(i)] = i;

    TrainResult result;
    std::vector<double> best_params, best_buffers;
    int since_best = 0;

    Array3 bx, by;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (int start = 0; start < train_x.b; start += cfg.batch_size) {
            const int n = std::min(cfg.batch_size, train_x.b - start);
            bx.resize(n, train_x.l, train_x.c);
            by.resize(n, train_y.l, train_y.c);
            for (int i = 0; i < n; ++i) {
                const int src = order[static_cast<std::size_t>(start + i)];
                std::copy(train_x.row(src, 0), train_x.row(src, 0) + train_x.l * train_x.c,
                          bx.row(i, 0));
                std::copy(train_y.row(src, 0), train_y.row(src, 0) + train_y.l * train_y.c,
                          by.row(i, 0));
            }
            net.forward(bx, true, &dropout_rng);
            const double batch_loss = net.backward_mse(by);
            adam.step(net.params(), net.grads(), lr, active);
            loss_sum += batch_loss * n;
        }
        EpochStats stats;
        stats.train_loss = loss_sum / train_x.b;
        stats.val_loss = Network::mse(net.forward(val_x, false), val_y);
        result.history.push_back(stats);
        if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.val_loss))
            throw TrainingError("training diverged at epoch " + std::to_string(epoch + 1));

        if (result.best_epoch < 0 || stats.val_loss < result.best_val_loss) {
            result.best_epoch = epoch;
            result.best_val_loss = stats.val_loss;
            since_best = 0;
            if (cfg.restore_best) {
                best_params = net.params();
                best_buffers = net.buffers();
            }
        } else {
            ++since_best;
            if (since_best >= cfg.patience) {
                result.stopped_early = true;
                break;
            }
        }
    }
    if (cfg.restore_best && !best_params.empty()) {
        net.params() = best_params;
        net.buffers() = best_buffers;
    }
    return result;
}

}  // namespace windcast::nnet
