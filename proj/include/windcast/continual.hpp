#pragma once

#include <cstdio>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"
#include "windcast/eval.hpp"
#include "windcast/forecaster.hpp"

namespace windcast::continual {

using json = nlohmann::ordered_json;
using models::Forecaster;
using models::ForecastSample;
using models::ModelKind;

// Which layers stay untouched during fine-tuning. An unset frozen_layers
// selects the default policy: freeze everything before the last hidden
// dense/conv/bilstm layer, leaving that block and the output trainable.
struct FinetuneConfig {
    std::optional<std::set<std::size_t>> frozen_layers;
    double lr_scale = 0.1;  // applied to the spec's optimizer rate
    int max_epochs = 100;
    int patience = 15;
    int batch_size = 64;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(lr_scale > 0.0) || lr_scale > 1.0)
            throw ConfigError("finetune: lr_scale must be in (0, 1]");
        if (max_epochs < 1) throw ConfigError("finetune: max_epochs must be >= 1");
        if (patience < 1) throw ConfigError("finetune: patience must be >= 1");
        if (batch_size < 1) throw ConfigError("finetune: batch_size must be >= 1");
    }

    json to_json() const {
        json j;
        if (frozen_layers) {
            json idx = json::array();
            for (std::size_t i : *frozen_layers) idx.push_back(i);
            j["frozen_layers"] = std::move(idx);
        } else {
            j["frozen_layers"] = "default";
        }
        j["lr_scale"] = lr_scale;
        j["max_epochs"] = max_epochs;
        j["patience"] = patience;
        j["batch_size"] = batch_size;
        j["rng_seed"] = rng_seed;
        return j;
    }

    static FinetuneConfig from_json(const json& j) {
        FinetuneConfig c;
        if (j.contains("frozen_layers") && j.at("frozen_layers").is_array()) {
            std::set<std::size_t> idx;
            for (const auto& v : j.at("frozen_layers")) idx.insert(v.get<std::size_t>());
            c.frozen_layers = std::move(idx);
        }
        c.lr_scale = j.value("lr_scale", 0.1);
        c.max_epochs = j.value("max_epochs", 100);
        c.patience = j.value("patience", 15);
        c.batch_size = j.value("batch_size", 64);
        c.rng_seed = j.value("rng_seed", std::uint64_t{0});
        c.validate();
        return c;
    }
};

inline std::set<std::size_t> default_frozen_layers(const nnet::ModelSpec& spec) {
    std::vector<std::size_t> main_layers;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const std::string& k = spec.layers[i].kind;
        if (k == "dense" || k == "conv1d" || k == "bilstm") main_layers.push_back(i);
    }
    std::set<std::size_t> frozen;
    if (main_layers.size() < 2) return frozen;  // nothing below the head to freeze
    const std::size_t first_trainable = main_layers[main_layers.size() - 2];
    for (std::size_t i = 0; i < first_trainable; ++i) frozen.insert(i);
    return frozen;
}

namespace detail {

inline void require_full_samples(const std::vector<ForecastSample>& samples, const char* which) {
    if (samples.empty()) throw InputError(std::string("finetune: empty new ") + which + " set");
    for (const auto& s : samples)
        if (s.features.size() != models::kSampleSteps ||
            s.targets_kw.size() != models::kSampleSteps)
            throw InputError("finetune: sample without the full step count");
}

inline std::unique_ptr<nnet::Network> clone_network(const nnet::ModelSpec& spec,
                                                    const nnet::Network& src) {
    auto net = std::make_unique<nnet::Network>(spec);
    net->params() = src.params();
    net->buffers() = src.buffers();
    return net;
}

}  // namespace detail

// Continues training from the original weights on new data only. Frozen
// layers keep their parameters and, for batchnorm, their running statistics
// bit-identical; the optimizer runs at the spec rate times lr_scale. The
// original normalizer rides along so the weights keep seeing the feature
// scale they were trained on.
inline Forecaster finetune(const Forecaster& model,
                           const std::vector<ForecastSample>& new_train,
                           const std::vector<ForecastSample>& new_val,
                           const FinetuneConfig& cfg) {
    if (!models::is_neural(model.kind))
        throw ConfigError(std::string("finetune: not defined for the ") +
                          models::kind_name(model.kind) + " model");
    cfg.validate();
    detail::require_full_samples(new_train, "training");
    detail::require_full_samples(new_val, "validation");
    if (!model.net) throw IntegrityError("finetune: model has no network");
    if (!model.normalizer.fitted()) throw IntegrityError("finetune: model has no normalizer");

    Forecaster out;
    out.kind = model.kind;
    out.curve = model.curve;
    out.spec = model.spec;
    out.normalizer = model.normalizer;
    out.net = detail::clone_network(model.spec, *model.net);
    out.net->set_frozen_layers(cfg.frozen_layers ? *cfg.frozen_layers
                                                 : default_frozen_layers(model.spec));

    nnet::Array3 tx, ty, vx, vy;
    models::sample_tensors(model.kind, new_train, model.normalizer, tx, ty);
    models::sample_tensors(model.kind, new_val, model.normalizer, vx, vy);

    nnet::TrainConfig tc;
    tc.batch_size = cfg.batch_size;
    tc.max_epochs = cfg.max_epochs;
    tc.patience = cfg.patience;
    tc.restore_best = true;
    tc.learning_rate = model.spec.learning_rate * cfg.lr_scale;
    tc.rng_seed = cfg.rng_seed;
    out.train_history =
        nnet::train_network(*out.net, tx, ty, vx, vy, tc, /*params_preinitialized=*/true);
    return out;
}

struct NewDataSplit {
    std::vector<ForecastSample> train;
    std::vector<ForecastSample> val;
    std::vector<ForecastSample> test;
};

// One model kind scored on the identical new test set under each update
// policy, plus the data-independent power-curve reference.
struct StrategyReport {
    std::string model;
    eval::MetricsReport baseline;
    eval::MetricsReport original;   // strategy 1: keep the old model
    eval::MetricsReport retrain;    // strategy 2: fresh model, fresh normalizer
    eval::MetricsReport continual;  // strategy 3: fine-tune the old weights

    json to_json() const {
        return json{{"model", model},
                    {"baseline", baseline.to_json()},
                    {"original", original.to_json()},
                    {"retrain", retrain.to_json()},
                    {"continual", continual.to_json()}};
    }
};

inline StrategyReport run_strategies(const Forecaster& original_model,
                                     const models::ModelConfig& cfg, const NewDataSplit& split,
                                     const FinetuneConfig& fcfg,
                                     const models::TrainOptions& retrain_opts = {}) {
    if (!models::is_neural(original_model.kind))
        throw ConfigError("strategies: only neural models support all three update policies");
    if (cfg.kind != original_model.kind)
        throw ConfigError("strategies: config kind does not match the original model");
    if (split.test.empty()) throw InputError("strategies: empty new test set");

    const auto truth = models::targets_matrix(split.test);
    const double capacity = original_model.normalizer.capacity_kw();

    StrategyReport rep;
    rep.model = models::kind_name(original_model.kind);

    std::vector<std::vector<double>> curve_preds;
    curve_preds.reserve(split.test.size());
    for (const auto& s : split.test)
        curve_preds.push_back(models::baseline_forecast(s, original_model.curve));
    rep.baseline = eval::compute_metrics(curve_preds, truth, capacity);

    // strategy 1 sees only the new test set
    rep.original =
        eval::compute_metrics(models::forecast_many(original_model, split.test), truth, capacity);

    std::vector<ingest::FeatureVector> rows;
    for (const auto& s : split.train)
        rows.insert(rows.end(), s.features.begin(), s.features.end());
    const ingest::Normalizer fresh = ingest::Normalizer::fit(rows, capacity);
    const Forecaster retrained = models::train_forecaster(cfg, split.train, split.val, fresh,
                                                          original_model.curve, retrain_opts);
    rep.retrain =
        eval::compute_metrics(models::forecast_many(retrained, split.test), truth, capacity);

    const Forecaster tuned = finetune(original_model, split.train, split.val, fcfg);
    rep.continual =
        eval::compute_metrics(models::forecast_many(tuned, split.test), truth, capacity);
    return rep;
}

// strategy-by-model table, one row per (model, policy)
inline std::string strategy_table_csv(const std::vector<StrategyReport>& reports) {
    std::string out = "model,strategy,mb_kw,mae_kw,rmse_kw,nrmse_pct\n";
    char buf[160];
    const auto row = [&](const std::string& model, const char* strategy,
                         const eval::MetricsReport& r) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g\n", model.c_str(),
                      strategy, r.mb, r.mae, r.rmse, r.nrmse_pct);
        out += buf;
    };
    for (const auto& rep : reports) {
        row(rep.model, "baseline", rep.baseline);
        row(rep.model, "original", rep.original);
        row(rep.model, "retrain", rep.retrain);
        row(rep.model, "continual", rep.continual);
    }
    return out;
}

}  // namespace windcast::continual
