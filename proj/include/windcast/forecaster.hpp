#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/eval.hpp"
#include "windcast/gbdt.hpp"
#include "windcast/nnet/network.hpp"
#include "windcast/nnet/train.hpp"
#include "windcast/power_curve.hpp"
#include "windcast/sampler.hpp"

namespace windcast::models {

using json = nlohmann::ordered_json;
using sampler::ForecastSample;

inline constexpr std::size_t kSampleSteps = static_cast<std::size_t>(sampler::kSampleSteps);

enum class ModelKind { baseline, gb, nn, cnn, lstm };

inline constexpr const char* kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::baseline: return "baseline";
        case ModelKind::gb: return "gb";
        case ModelKind::nn: return "nn";
        case ModelKind::cnn: return "cnn";
        case ModelKind::lstm: return "lstm";
    }
    return "?";
}

inline ModelKind parse_kind(const std::string& s) {
    for (ModelKind k : {ModelKind::baseline, ModelKind::gb, ModelKind::nn, ModelKind::cnn,
                        ModelKind::lstm})
        if (s == kind_name(k)) return k;
    throw ConfigError("unknown model kind '" + s + "' (baseline|gb|nn|cnn|lstm)");
}

inline bool is_neural(ModelKind k) {
    return k == ModelKind::nn || k == ModelKind::cnn || k == ModelKind::lstm;
}

// Shipped architectures. Single-timepoint network: ten features in, one
// normalized power out.
inline nnet::ModelSpec default_nn_spec() {
    nnet::ModelSpec s;
    s.input = {1, static_cast<int>(ingest::kNumFeatures)};
    s.layers = {nnet::LayerSpec::dense(64, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::dropout(0.5),
                nnet::LayerSpec::dense(64, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::dropout(0.5),
                nnet::LayerSpec::dense(1)};
    s.learning_rate = 0.003;
    return s;
}

// Sequence-to-sequence convolutional network over the 49-step sample.
inline nnet::ModelSpec default_cnn_spec() {
    nnet::ModelSpec s;
    s.input = {static_cast<int>(kSampleSteps), static_cast<int>(ingest::kNumFeatures)};
    s.layers = {nnet::LayerSpec::conv1d(40, 5, 2, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::conv1d(64, 5, 2, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::flatten(),
                nnet::LayerSpec::dense(96, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::dropout(0.5),
                nnet::LayerSpec::dense(static_cast<int>(kSampleSteps))};
    s.learning_rate = 0.0005;
    return s;
}

// Bidirectional LSTM reading the whole sequence; its two final states feed
// the dense head that emits all 49 steps at once.
inline nnet::ModelSpec default_lstm_spec() {
    nnet::ModelSpec s;
    s.input = {static_cast<int>(kSampleSteps), static_cast<int>(ingest::kNumFeatures)};
    s.layers = {nnet::LayerSpec::bilstm(96, /*return_sequences=*/false),
                nnet::LayerSpec::dense(16, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::dropout(0.5),
                nnet::LayerSpec::dense(32, nnet::Activation::relu),
                nnet::LayerSpec::batchnorm(),
                nnet::LayerSpec::dropout(0.5),
                nnet::LayerSpec::dense(static_cast<int>(kSampleSteps))};
    s.learning_rate = 0.001;
    return s;
}

inline gbdt::GbConfig default_gb_config() { return gbdt::GbConfig{}; }

// One sampled or default configuration for any kind. Only the member
// matching `kind` is meaningful.
struct ModelConfig {
    ModelKind kind = ModelKind::baseline;
    nnet::ModelSpec spec;
    gbdt::GbConfig gb;

    static ModelConfig defaults(ModelKind k) {
        ModelConfig c;
        c.kind = k;
        switch (k) {
            case ModelKind::nn: c.spec = default_nn_spec(); break;
            case ModelKind::cnn: c.spec = default_cnn_spec(); break;
            case ModelKind::lstm: c.spec = default_lstm_spec(); break;
            case ModelKind::gb: c.gb = default_gb_config(); break;
            case ModelKind::baseline: break;
        }
        return c;
    }

    json to_json() const {
        json j{{"kind", kind_name(kind)}};
        if (is_neural(kind)) j["spec"] = spec.to_json();
        if (kind == ModelKind::gb) j["gb"] = gb.to_json();
        return j;
    }

    static ModelConfig from_json(const json& j) {
        ModelConfig c;
        c.kind = parse_kind(j.at("kind").get<std::string>());
        if (is_neural(c.kind)) c.spec = nnet::ModelSpec::from_json(j.at("spec"));
        if (c.kind == ModelKind::gb) c.gb = gbdt::GbConfig::from_json(j.at("gb"));
        return c;
    }
};

struct TrainOptions {
    nnet::TrainConfig train;  // rng_seed is the per-model training seed
};

// A trained model of any kind plus the normalizer its inputs must pass
// through. The baseline carries only the power curve.
struct Forecaster {
    ModelKind kind = ModelKind::baseline;
    PowerCurve curve;
    gbdt::GbEnsemble gb;
    nnet::ModelSpec spec;
    std::unique_ptr<nnet::Network> net;
    ingest::Normalizer normalizer;
    nnet::TrainResult train_history;  // neural kinds only

    std::uint64_t normalizer_hash() const {
        return kind == ModelKind::baseline ? 0 : normalizer.hash();
    }
};

namespace detail {

inline void require_samples(const std::vector<ForecastSample>& samples, const char* which) {
    if (samples.empty()) throw InputError(std::string("train: empty ") + which + " set");
    for (const auto& s : samples)
        if (s.features.size() != kSampleSteps || s.targets_kw.size() != kSampleSteps)
            throw InputError("train: sample without the full step count");
}

// every (sample, step) as one row: (K*49, 1, 10) and (K*49, 1, 1)
inline void row_tensors(const std::vector<ForecastSample>& samples,
                        const ingest::Normalizer& norm, nnet::Array3& x, nnet::Array3& y) {
    const int n = static_cast<int>(samples.size() * kSampleSteps);
    x.resize(n, 1, static_cast<int>(ingest::kNumFeatures));
    y.resize(n, 1, 1);
    int row = 0;
    for (const auto& s : samples) {
        for (std::size_t t = 0; t < kSampleSteps; ++t, ++row) {
            const ingest::FeatureVector f = norm.apply(s.features[t]);
            for (std::size_t c = 0; c < ingest::kNumFeatures; ++c)
                x.at(row, 0, static_cast<int>(c)) = f[c];
            y.at(row, 0, 0) = norm.normalize_power(s.targets_kw[t]);
        }
    }
}

// whole samples as sequences: (K, 49, 10) and (K, 1, 49)
inline void seq_tensors(const std::vector<ForecastSample>& samples,
                        const ingest::Normalizer& norm, nnet::Array3& x, nnet::Array3& y) {
    const int k = static_cast<int>(samples.size());
    x.resize(k, static_cast<int>(kSampleSteps), static_cast<int>(ingest::kNumFeatures));
    y.resize(k, 1, static_cast<int>(kSampleSteps));
    for (int i = 0; i < k; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < kSampleSteps; ++t) {
            const ingest::FeatureVector f = norm.apply(s.features[t]);
            for (std::size_t c = 0; c < ingest::kNumFeatures; ++c)
                x.at(i, static_cast<int>(t), static_cast<int>(c)) = f[c];
            y.at(i, 0, static_cast<int>(t)) = norm.normalize_power(s.targets_kw[t]);
        }
    }
}

inline void gb_rows(const std::vector<ForecastSample>& samples, const ingest::Normalizer& norm,
                    std::vector<double>& x, std::vector<double>& y) {
    x.clear();
    y.clear();
    x.reserve(samples.size() * kSampleSteps * ingest::kNumFeatures);
    y.reserve(samples.size() * kSampleSteps);
    for (const auto& s : samples) {
        for (std::size_t t = 0; t < kSampleSteps; ++t) {
            const ingest::FeatureVector f = norm.apply(s.features[t]);
            x.insert(x.end(), f.begin(), f.end());
            y.push_back(norm.normalize_power(s.targets_kw[t]));
        }
    }
}

}  // namespace detail

// Normalized training tensors for a neural kind: nn packs every timepoint as
// its own row, cnn and lstm keep whole sequences.
inline void sample_tensors(ModelKind kind, const std::vector<ForecastSample>& samples,
                           const ingest::Normalizer& norm, nnet::Array3& x, nnet::Array3& y) {
    if (kind == ModelKind::nn)
        detail::row_tensors(samples, norm, x, y);
    else
        detail::seq_tensors(samples, norm, x, y);
}

// The uncorrected reference: hub-adjusted NWP wind speed straight through
// the power curve. No learning, no normalizer.
inline std::vector<double> baseline_forecast(const ForecastSample& sample,
                                             const PowerCurve& curve) {
    if (sample.features.size() != kSampleSteps)
        throw InputError("baseline: sample without the full step count");
    std::vector<double> out(kSampleSteps);
    for (std::size_t t = 0; t < kSampleSteps; ++t) out[t] = curve(sample.features[t][0]);
    return out;
}

inline Forecaster train_forecaster(const ModelConfig& cfg,
                                   const std::vector<ForecastSample>& train_samples,
                                   const std::vector<ForecastSample>& val_samples,
                                   const ingest::Normalizer& normalizer,
                                   const PowerCurve& curve, const TrainOptions& opts = {}) {
    Forecaster f;
    f.kind = cfg.kind;
    f.curve = curve;
    if (cfg.kind == ModelKind::baseline) return f;  // parameter-free

    detail::require_samples(train_samples, "training");
    f.normalizer = normalizer;

    if (cfg.kind == ModelKind::gb) {
        std::vector<double> x, y;
        detail::gb_rows(train_samples, normalizer, x, y);
        f.gb = gbdt::fit_gb(x, ingest::kNumFeatures, y, cfg.gb);
        return f;
    }

    detail::require_samples(val_samples, "validation");
    nnet::Array3 tx, ty, vx, vy;
    sample_tensors(cfg.kind, train_samples, normalizer, tx, ty);
    sample_tensors(cfg.kind, val_samples, normalizer, vx, vy);
    f.spec = cfg.spec;
    f.net = std::make_unique<nnet::Network>(f.spec);
    f.train_history = nnet::train_network(*f.net, tx, ty, vx, vy, opts.train);
    return f;
}

// 49 kW values per sample for every kind; single-timepoint kinds are mapped
// row-wise. Neural inference runs the whole batch in one forward pass.
inline std::vector<std::vector<double>> forecast_many(
    const Forecaster& f, const std::vector<ForecastSample>& samples) {
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    if (samples.empty()) return out;

    if (f.kind == ModelKind::baseline) {
        for (const auto& s : samples) out.push_back(baseline_forecast(s, f.curve));
        return out;
    }
    if (!f.normalizer.fitted()) throw IntegrityError("forecast: model has no fitted normalizer");

    if (f.kind == ModelKind::gb) {
        std::vector<double> x;
        x.reserve(samples.size() * kSampleSteps * ingest::kNumFeatures);
        for (const auto& s : samples) {
            if (s.features.size() != kSampleSteps)
                throw InputError("forecast: sample without the full step count");
            for (std::size_t t = 0; t < kSampleSteps; ++t) {
                const ingest::FeatureVector fv = f.normalizer.apply(s.features[t]);
                x.insert(x.end(), fv.begin(), fv.end());
            }
        }
        const std::vector<double> pred = gbdt::predict_gb(f.gb, x, ingest::kNumFeatures);
        std::size_t i = 0;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            std::vector<double> row(kSampleSteps);
            for (std::size_t t = 0; t < kSampleSteps; ++t, ++i)
                row[t] = f.normalizer.denormalize_power(pred[i]);
            out.push_back(std::move(row));
        }
        return out;
    }

    if (!f.net) throw IntegrityError("forecast: neural model has no network");
    nnet::Array3 x, y_unused;
    if (f.kind == ModelKind::nn) {
        detail::row_tensors(samples, f.normalizer, x, y_unused);
        const nnet::Array3& pred = f.net->forward(x, /*training=*/false);
        int row = 0;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            std::vector<double> vals(kSampleSteps);
            for (std::size_t t = 0; t < kSampleSteps; ++t, ++row)
                vals[t] = f.normalizer.denormalize_power(pred.at(row, 0, 0));
            out.push_back(std::move(vals));
        }
    } else {
        detail::seq_tensors(samples, f.normalizer, x, y_unused);
        const nnet::Array3& pred = f.net->forward(x, /*training=*/false);
        for (int k = 0; k < static_cast<int>(samples.size()); ++k) {
            std::vector<double> vals(kSampleSteps);
            for (std::size_t t = 0; t < kSampleSteps; ++t)
                vals[t] = f.normalizer.denormalize_power(pred.at(k, 0, static_cast<int>(t)));
            out.push_back(std::move(vals));
        }
    }
    return out;
}

inline std::vector<double> forecast(const Forecaster& f, const ForecastSample& sample) {
    return forecast_many(f, {sample})[0];
}

inline std::vector<std::vector<double>> targets_matrix(
    const std::vector<ForecastSample>& samples) {
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.targets_kw);
    return out;
}

// --- random hyperparameter search -------------------------------------------

// Parametric ranges bracketing the shipped table values; all config-visible.
// A non-empty `candidates` list switches to uniform draws from that list.
struct SearchSpace {
    std::vector<int> dense_units = {16, 32, 48, 64, 96, 128};
    std::vector<double> dropout_rates = {0.0, 0.25, 0.5};
    double lr_min = 1e-4;
    double lr_max = 1e-2;  // log-uniform
    std::vector<int> conv_filters = {16, 24, 32, 40, 48, 64};
    std::vector<int> kernel_widths = {3, 5, 7};
    std::vector<int> strides = {1, 2};
    std::vector<int> lstm_units = {32, 48, 64, 96, 128};
    std::vector<int> gb_depths = {2, 3, 4, 5, 6, 8};
    std::vector<int> gb_stages = {50, 100, 200, 300};
    double gb_lr_min = 0.01;
    double gb_lr_max = 0.2;
    std::vector<ModelConfig> candidates;

    void validate() const {
        if (!candidates.empty()) return;
        if (dense_units.empty() || dropout_rates.empty() || conv_filters.empty() ||
            kernel_widths.empty() || strides.empty() || lstm_units.empty() ||
            gb_depths.empty() || gb_stages.empty())
            throw ConfigError("search space: empty choice list");
        if (!(lr_min > 0.0) || lr_max < lr_min || !(gb_lr_min > 0.0) || gb_lr_max < gb_lr_min)
            throw ConfigError("search space: bad learning-rate range");
    }

    json to_json() const {
        json j{{"dense_units", dense_units},
               {"dropout_rates", dropout_rates},
               {"lr_min", lr_min},
               {"lr_max", lr_max},
               {"conv_filters", conv_filters},
               {"kernel_widths", kernel_widths},
               {"strides", strides},
               {"lstm_units", lstm_units},
               {"gb_depths", gb_depths},
               {"gb_stages", gb_stages},
               {"gb_lr_min", gb_lr_min},
               {"gb_lr_max", gb_lr_max}};
        if (!candidates.empty()) {
            json c = json::array();
            for (const auto& m : candidates) c.push_back(m.to_json());
            j["candidates"] = std::move(c);
        }
        return j;
    }

    static SearchSpace from_json(const json& j) {
        SearchSpace s;
        const auto load_ints = [&](const char* key, std::vector<int>& out) {
            if (j.contains(key)) out = j.at(key).get<std::vector<int>>();
        };
        load_ints("dense_units", s.dense_units);
        load_ints("conv_filters", s.conv_filters);
        load_ints("kernel_widths", s.kernel_widths);
        load_ints("strides", s.strides);
        load_ints("lstm_units", s.lstm_units);
        load_ints("gb_depths", s.gb_depths);
        load_ints("gb_stages", s.gb_stages);
        if (j.contains("dropout_rates"))
            s.dropout_rates = j.at("dropout_rates").get<std::vector<double>>();
        if (j.contains("lr_min")) s.lr_min = j.at("lr_min").get<double>();
        if (j.contains("lr_max")) s.lr_max = j.at("lr_max").get<double>();
        if (j.contains("gb_lr_min")) s.gb_lr_min = j.at("gb_lr_min").get<double>();
        if (j.contains("gb_lr_max")) s.gb_lr_max = j.at("gb_lr_max").get<double>();
        if (j.contains("candidates"))
            for (const auto& c : j.at("candidates"))
                s.candidates.push_back(ModelConfig::from_json(c));
        s.validate();
        return s;
    }
};

namespace detail {

template <typename T>
inline T pick(Rng& rng, const std::vector<T>& choices) {
    return choices[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1))];
}

inline double log_uniform(Rng& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

inline ModelConfig sample_config(ModelKind kind, const SearchSpace& space, Rng& rng) {
    if (!space.candidates.empty()) {
        ModelConfig c = pick(rng, space.candidates);
        if (c.kind != kind)
            throw ConfigError("search space candidate kind does not match the searched kind");
        return c;
    }
    ModelConfig c;
    c.kind = kind;
    switch (kind) {
        case ModelKind::gb:
            c.gb.max_depth = pick(rng, space.gb_depths);
            c.gb.n_stages = pick(rng, space.gb_stages);
            c.gb.learning_rate = log_uniform(rng, space.gb_lr_min, space.gb_lr_max);
            break;
        case ModelKind::nn: {
            c.spec.input = {1, static_cast<int>(ingest::kNumFeatures)};
            const double rate = pick(rng, space.dropout_rates);
            for (int block = 0; block < 2; ++block) {
                c.spec.layers.push_back(
                    nnet::LayerSpec::dense(pick(rng, space.dense_units), nnet::Activation::relu));
                c.spec.layers.push_back(nnet::LayerSpec::batchnorm());
                if (rate > 0.0) c.spec.layers.push_back(nnet::LayerSpec::dropout(rate));
            }
            c.spec.layers.push_back(nnet::LayerSpec::dense(1));
            c.spec.learning_rate = log_uniform(rng, space.lr_min, space.lr_max);
            break;
        }
        case ModelKind::cnn: {
            c.spec.input = {static_cast<int>(kSampleSteps),
                            static_cast<int>(ingest::kNumFeatures)};
            // widths <= 7 and strides <= 2 keep both conv output lengths
            // positive for a 49-step input
            for (int block = 0; block < 2; ++block) {
                c.spec.layers.push_back(nnet::LayerSpec::conv1d(
                    pick(rng, space.conv_filters), pick(rng, space.kernel_widths),
                    pick(rng, space.strides), nnet::Activation::relu));
                c.spec.layers.push_back(nnet::LayerSpec::batchnorm());
            }
            c.spec.layers.push_back(nnet::LayerSpec::flatten());
            const double rate = pick(rng, space.dropout_rates);
            c.spec.layers.push_back(
                nnet::LayerSpec::dense(pick(rng, space.dense_units), nnet::Activation::relu));
            c.spec.layers.push_back(nnet::LayerSpec::batchnorm());
            if (rate > 0.0) c.spec.layers.push_back(nnet::LayerSpec::dropout(rate));
            c.spec.layers.push_back(nnet::LayerSpec::dense(static_cast<int>(kSampleSteps)));
            c.spec.learning_rate = log_uniform(rng, space.lr_min, space.lr_max);
            break;
        }
        case ModelKind::lstm: {
            c.spec.input = {static_cast<int>(kSampleSteps),
                            static_cast<int>(ingest::kNumFeatures)};
            c.spec.layers.push_back(nnet::LayerSpec::bilstm(pick(rng, space.lstm_units), false));
            const double rate = pick(rng, space.dropout_rates);
            for (int block = 0; block < 2; ++block) {
                c.spec.layers.push_back(
                    nnet::LayerSpec::dense(pick(rng, space.dense_units), nnet::Activation::relu));
                c.spec.layers.push_back(nnet::LayerSpec::batchnorm());
                if (rate > 0.0) c.spec.layers.push_back(nnet::LayerSpec::dropout(rate));
            }
            c.spec.layers.push_back(nnet::LayerSpec::dense(static_cast<int>(kSampleSteps)));
            c.spec.learning_rate = log_uniform(rng, space.lr_min, space.lr_max);
            break;
        }
        case ModelKind::baseline:
            throw ConfigError("search: the baseline has no hyperparameters");
    }
    return c;
}

}  // namespace detail

struct SearchTrial {
    int index = 0;
    json config;
    std::uint64_t config_hash = 0;
    double val_rmse = 0.0;
    int epochs = 0;
    bool diverged = false;
};

struct SearchResult {
    ModelConfig best;
    int best_index = -1;
    double best_val_rmse = 0.0;
    std::vector<SearchTrial> trials;
};

// Uniform random draws from the space, each trained on `train` and scored by
// per-sample RMSE on `val`. The argmin wins; ties go to the earliest trial.
inline SearchResult random_search(ModelKind kind, const SearchSpace& space,
                                  const std::vector<ForecastSample>& train_samples,
                                  const std::vector<ForecastSample>& val_samples,
                                  const ingest::Normalizer& normalizer, const PowerCurve& curve,
                                  int n_configs, std::uint64_t seed,
                                  const TrainOptions& base_opts = {}) {
    if (kind == ModelKind::baseline)
        throw ConfigError("search: the baseline has no hyperparameters");
    space.validate();
    if (n_configs < 1) throw ConfigError("search: n_configs must be >= 1");
    detail::require_samples(train_samples, "training");
    detail::require_samples(val_samples, "validation");

    const auto truth = targets_matrix(val_samples);
    SearchResult result;
    Rng rng(derive_seed(seed, 11));
    for (int i = 0; i < n_configs; ++i) {
        const ModelConfig cfg = detail::sample_config(kind, space, rng);
        SearchTrial trial;
        trial.index = i;
        trial.config = cfg.to_json();
        trial.config_hash = fnv1a64(trial.config.dump());
        TrainOptions opts = base_opts;
        opts.train.rng_seed = derive_seed(seed, 1000 + static_cast<std::uint64_t>(i));
        try {
            const Forecaster f =
                train_forecaster(cfg, train_samples, val_samples, normalizer, curve, opts);
            trial.epochs = static_cast<int>(f.train_history.history.size());
            const auto preds = forecast_many(f, val_samples);
            trial.val_rmse =
                eval::compute_metrics(preds, truth, normalizer.capacity_kw()).rmse;
        } catch (const TrainingError&) {
            trial.diverged = true;
            trial.val_rmse = std::numeric_limits<double>::infinity();
        }
        result.trials.push_back(std::move(trial));
        const SearchTrial& t = result.trials.back();
        if (!t.diverged && (result.best_index < 0 || t.val_rmse < result.best_val_rmse)) {
            result.best_index = i;
            result.best_val_rmse = t.val_rmse;
            result.best = cfg;
        }
    }
    if (result.best_index < 0) {
        std::string log = "search: all " + std::to_string(n_configs) + " trials diverged";
        for (const auto& t : result.trials)
            log += "\n  trial " + std::to_string(t.index) + ": diverged, config " +
                   hex64(t.config_hash);
        throw TrainingError(log);
    }
    return result;
}

inline json search_result_to_json(const SearchResult& r) {
    json trials = json::array();
    for (const auto& t : r.trials)
        trials.push_back(json{{"trial", t.index},
                              {"config", t.config},
                              {"config_hash", hex64(t.config_hash)},
                              {"val_rmse", t.diverged ? json() : json(t.val_rmse)},
                              {"epochs", t.epochs},
                              {"diverged", t.diverged}});
    return json{{"best_index", r.best_index},
                {"best_val_rmse", r.best_val_rmse},
                {"best_config", r.best.to_json()},
                {"trials", std::move(trials)}};
}

}  // namespace windcast::models
