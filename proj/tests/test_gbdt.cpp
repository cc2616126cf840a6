#include <gtest/gtest.h>

#include <cmath>

#include "gb_oracle.hpp"
#include "windcast/gbdt.hpp"
#include "windcast/rng.hpp"

using namespace windcast;
using gbdt::GbConfig;
using gbdt::GbEnsemble;

namespace {

struct TinyData {
    std::vector<double> x;
    std::vector<double> y;
    std::size_t nf;
    std::size_t rows;
};

// Tie-heavy data: features and targets on a coarse dyadic grid, so sums are
// exact in binary floating point and equal gains are exactly equal in both
// implementations.
TinyData random_dyadic(Rng& rng) {
    TinyData d;
    d.rows = static_cast<std::size_t>(rng.uniform_int(4, 50));
    d.nf = static_cast<std::size_t>(rng.uniform_int(1, 3));
    d.x.resize(d.rows * d.nf);
    d.y.resize(d.rows);
    for (auto& v : d.x) v = static_cast<double>(rng.uniform_int(0, 5)) * 0.25;
    for (auto& v : d.y) v = static_cast<double>(rng.uniform_int(0, 8)) * 0.125;
    return d;
}

TinyData random_continuous(Rng& rng) {
    TinyData d;
    d.rows = static_cast<std::size_t>(rng.uniform_int(4, 50));
    d.nf = static_cast<std::size_t>(rng.uniform_int(1, 4));
    d.x.resize(d.rows * d.nf);
    d.y.resize(d.rows);
    for (auto& v : d.x) v = rng.uniform(-2.0, 2.0);
    for (auto& v : d.y) v = rng.uniform(-1.0, 1.0);
    return d;
}

double train_mse_at_stage(const GbEnsemble& ens, const TinyData& d, int stage) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.rows; ++i) {
        const double p = ens.predict_row(&d.x[i * d.nf], stage);
        acc += (p - d.y[i]) * (p - d.y[i]);
    }
    return acc / static_cast<double>(d.rows);
}

}  // namespace

TEST(GbConfigTest, DefaultsAndValidation) {
    GbConfig cfg;
    EXPECT_EQ(cfg.n_stages, 100);
    EXPECT_DOUBLE_EQ(cfg.learning_rate, 0.05);
    EXPECT_EQ(cfg.max_depth, 5);
    cfg.validate();

    GbConfig bad = cfg;
    bad.n_stages = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.learning_rate = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.learning_rate = 1.5;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.max_depth = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(GbFit, RejectsDegenerateInput) {
    GbConfig cfg;
    EXPECT_THROW(gbdt::fit_gb({1.0}, 1, {1.0}, cfg), InputError);               // N < 2
    EXPECT_THROW(gbdt::fit_gb({1.0, 2.0, 3.0}, 2, {1.0, 2.0}, cfg), InputError);  // ragged
    EXPECT_THROW(gbdt::fit_gb({}, 0, {}, cfg), InputError);
}

TEST(GbFit, ConstantTargetsDegenerateTrees) {
    GbConfig cfg;
    cfg.n_stages = 5;
    const std::vector<double> x = {0, 1, 2, 3, 4, 5};
    const std::vector<double> y(6, 3.25);
    const GbEnsemble ens = gbdt::fit_gb(x, 1, y, cfg);
    EXPECT_DOUBLE_EQ(ens.base_prediction, 3.25);
    ASSERT_EQ(ens.trees.size(), 5u);
    for (const auto& t : ens.trees) {
        ASSERT_EQ(t.nodes.size(), 1u);  // single zero-value leaf
        EXPECT_EQ(t.nodes[0].feature, -1);
        EXPECT_DOUBLE_EQ(t.nodes[0].value, 0.0);
    }
    for (double v : gbdt::predict_gb(ens, x, 1)) EXPECT_DOUBLE_EQ(v, 3.25);
}

TEST(GbFit, SingleStumpMatchesBruteForce) {
    // 1-D, 4 points; enumerate all thresholds by hand
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y = {5.0, 5.5, 9.0, 9.5};
    GbConfig cfg;
    cfg.n_stages = 1;
    cfg.max_depth = 1;
    cfg.learning_rate = 1.0;
    const GbEnsemble ens = gbdt::fit_gb(x, 1, y, cfg);
    ASSERT_EQ(ens.trees.size(), 1u);
    const auto& root = ens.trees[0].nodes[0];
    ASSERT_EQ(root.feature, 0);
    // best split separates {5, 5.5} from {9, 9.5}: threshold 1.5
    EXPECT_DOUBLE_EQ(root.threshold, 1.5);
    EXPECT_DOUBLE_EQ(ens.trees[0].nodes[static_cast<std::size_t>(root.left)].value,
                     5.25 - 7.25);
    EXPECT_DOUBLE_EQ(ens.trees[0].nodes[static_cast<std::size_t>(root.right)].value,
                     9.25 - 7.25);
}

TEST(GbFit, InterpolatesTinyNoiselessData) {
    // lr = 1, many stages, distinct feature values: train RMSE below
    // 1e-6 of the target standard deviation
    Rng rng(77);
    TinyData d;
    d.rows = 12;
    d.nf = 2;
    d.x.resize(24);
    d.y.resize(12);
    for (auto& v : d.x) v = rng.uniform(0.0, 1.0);
    for (auto& v : d.y) v = rng.uniform(-3.0, 3.0);
    GbConfig cfg;
    cfg.learning_rate = 1.0;
    cfg.n_stages = 60;
    cfg.max_depth = 5;
    const GbEnsemble ens = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
    double mean = 0.0, var = 0.0;
    for (double v : d.y) mean += v;
    mean /= 12.0;
    for (double v : d.y) var += (v - mean) * (v - mean);
    var /= 12.0;
    EXPECT_LT(std::sqrt(train_mse_at_stage(ens, d, -1)), 1e-6 * std::sqrt(var));
}

TEST(GbFit, TrainLossMonotoneInStageCount) {
    Rng rng(101);
    for (int rep = 0; rep < 5; ++rep) {
        const TinyData d = random_continuous(rng);
        GbConfig cfg;
        cfg.n_stages = 30;
        cfg.max_depth = 3;
        const GbEnsemble ens = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
        double prev = train_mse_at_stage(ens, d, 0);
        for (int stage = 1; stage <= 30; ++stage) {
            const double cur = train_mse_at_stage(ens, d, stage);
            EXPECT_LE(cur, prev + 1e-12) << "stage " << stage;
            prev = cur;
        }
    }
}

TEST(GbFit, CachedTrainPredictionsMatchPredict) {
    Rng rng(55);
    const TinyData d = random_continuous(rng);
    GbConfig cfg;
    cfg.n_stages = 100;
    const auto fit = gbdt::fit_gb_detailed(d.x, d.nf, d.y, cfg);
    const auto pred = gbdt::predict_gb(fit.ensemble, d.x, d.nf);
    ASSERT_EQ(pred.size(), fit.train_predictions.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        EXPECT_EQ(pred[i], fit.train_predictions[i]) << "row " << i;
}

TEST(GbFit, DepthLimitHolds) {
    Rng rng(31);
    const TinyData d = random_continuous(rng);
    for (int depth : {1, 2, 5}) {
        GbConfig cfg;
        cfg.n_stages = 10;
        cfg.max_depth = depth;
        const GbEnsemble ens = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
        for (const auto& t : ens.trees) EXPECT_LE(t.depth(), depth);
    }
}

TEST(GbPredict, EmptyTreeListReturnsBase) {
    GbEnsemble ens;
    ens.n_features = 2;
    ens.base_prediction = 4.5;
    const auto out = gbdt::predict_gb(ens, {0.0, 1.0, 5.0, -3.0}, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_DOUBLE_EQ(out[0], 4.5);
    EXPECT_DOUBLE_EQ(out[1], 4.5);
}

TEST(GbPredict, StumpTraversal) {
    GbEnsemble ens;
    ens.cfg.learning_rate = 0.5;
    ens.n_features = 1;
    ens.base_prediction = 1.0;
    gbdt::Tree t;
    t.nodes.push_back({0, 2.0, 0.0, 1, 2});
    t.nodes.push_back({-1, 0.0, 10.0, -1, -1});
    t.nodes.push_back({-1, 0.0, 20.0, -1, -1});
    ens.trees.push_back(t);
    const auto out = gbdt::predict_gb(ens, {1.5, 2.0, 2.5}, 1);
    EXPECT_DOUBLE_EQ(out[0], 1.0 + 0.5 * 10.0);
    EXPECT_DOUBLE_EQ(out[1], 1.0 + 0.5 * 10.0);  // boundary goes left
    EXPECT_DOUBLE_EQ(out[2], 1.0 + 0.5 * 20.0);
}

TEST(GbPredict, WidthMismatchRejected) {
    GbEnsemble ens;
    ens.n_features = 3;
    EXPECT_THROW(gbdt::predict_gb(ens, {1.0, 2.0}, 2), InputError);
    EXPECT_THROW(gbdt::predict_gb(ens, {1.0, 2.0}, 3), InputError);  // ragged
}

TEST(GbOracle, ExhaustiveAgreementDyadic) {
    Rng rng(2024);
    for (int rep = 0; rep < 60; ++rep) {
        const TinyData d = random_dyadic(rng);
        GbConfig cfg;
        cfg.n_stages = static_cast<int>(rng.uniform_int(1, 3));
        cfg.max_depth = static_cast<int>(rng.uniform_int(1, 2));
        const GbEnsemble got = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
        const auto want = gboracle::fit_ensemble(d.x, d.nf, d.y, cfg);
        EXPECT_EQ(gboracle::compare_ensembles(got, want), "") << "rep " << rep;
    }
}

TEST(GbOracle, ExhaustiveAgreementContinuous) {
    Rng rng(4048);
    for (int rep = 0; rep < 60; ++rep) {
        const TinyData d = random_continuous(rng);
        GbConfig cfg;
        cfg.n_stages = static_cast<int>(rng.uniform_int(1, 3));
        cfg.max_depth = static_cast<int>(rng.uniform_int(1, 2));
        const GbEnsemble got = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
        const auto want = gboracle::fit_ensemble(d.x, d.nf, d.y, cfg);
        EXPECT_EQ(gboracle::compare_ensembles(got, want), "") << "rep " << rep;
    }
}

TEST(GbSerialization, JsonRoundTripBitExact) {
    Rng rng(909);
    const TinyData d = random_continuous(rng);
    GbConfig cfg;
    cfg.n_stages = 8;
    const GbEnsemble ens = gbdt::fit_gb(d.x, d.nf, d.y, cfg);
    const auto j = gbdt::ensemble_to_json(ens);
    const GbEnsemble back = gbdt::ensemble_from_json(gbdt::json::parse(j.dump()));
    EXPECT_EQ(back.base_prediction, ens.base_prediction);
    EXPECT_EQ(back.n_features, ens.n_features);
    const auto p1 = gbdt::predict_gb(ens, d.x, d.nf);
    const auto p2 = gbdt::predict_gb(back, d.x, d.nf);
    EXPECT_EQ(p1, p2);
}

TEST(GbSerialization, CorruptPayloadRejected) {
    GbConfig cfg;
    const GbEnsemble ens = gbdt::fit_gb({0, 1, 2, 3}, 1, {1, 2, 3, 4}, cfg);
    auto j = gbdt::ensemble_to_json(ens);
    j["n_features"] = 0;
    EXPECT_THROW(gbdt::ensemble_from_json(j), IntegrityError);
}
