#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "windcast/common.hpp"

namespace windcast::gbdt {

using json = nlohmann::ordered_json;

struct GbConfig {
    int n_stages = 100;
    double learning_rate = 0.05;
    int max_depth = 5;
    int min_samples_split = 2;
    int min_samples_leaf = 1;

    void validate() const {
        if (n_stages < 1) throw ConfigError("gb: n_stages must be >= 1");
        if (!(learning_rate > 0.0) || learning_rate > 1.0)
            throw ConfigError("gb: learning_rate must be in (0, 1]");
        if (max_depth < 1) throw ConfigError("gb: max_depth must be >= 1");
        if (min_samples_split < 2) throw ConfigError("gb: min_samples_split must be >= 2");
        if (min_samples_leaf < 1) throw ConfigError("gb: min_samples_leaf must be >= 1");
    }

    json to_json() const {
        return json{{"n_stages", n_stages},
                    {"learning_rate", learning_rate},
                    {"max_depth", max_depth},
                    {"min_samples_split", min_samples_split},
                    {"min_samples_leaf", min_samples_leaf}};
    }

    static GbConfig from_json(const json& j) {
        GbConfig cfg;
        cfg.n_stages = j.at("n_stages").get<int>();
        cfg.learning_rate = j.at("learning_rate").get<double>();
        cfg.max_depth = j.at("max_depth").get<int>();
        cfg.min_samples_split = j.at("min_samples_split").get<int>();
        cfg.min_samples_leaf = j.at("min_samples_leaf").get<int>();
        cfg.validate();
        return cfg;
    }
};

// feature < 0 marks a leaf; children index into Tree::nodes
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    double predict_row(const double* x) const {
        std::size_t i = 0;
        while (nodes[i].feature >= 0) {
            const TreeNode& nd = nodes[i];
            i = static_cast<std::size_t>(x[nd.feature] <= nd.threshold ? nd.left : nd.right);
        }
        return nodes[i].value;
    }

    int depth() const { return depth_of(0); }

private:
    int depth_of(std::size_t i) const {
        if (nodes[i].feature < 0) return 0;
        return 1 + std::max(depth_of(static_cast<std::size_t>(nodes[i].left)),
                            depth_of(static_cast<std::size_t>(nodes[i].right)));
    }
};

struct GbEnsemble {
    GbConfig cfg;
    std::size_t n_features = 0;
    double base_prediction = 0.0;
    std::vector<Tree> trees;

    // stage_limit < 0 means all stages
    double predict_row(const double* x, int stage_limit = -1) const {
        const std::size_t m = stage_limit < 0
                                  ? trees.size()
                                  : std::min(trees.size(), static_cast<std::size_t>(stage_limit));
        double f = base_prediction;
        for (std::size_t s = 0; s < m; ++s) f += cfg.learning_rate * trees[s].predict_row(x);
        return f;
    }
};

namespace detail {

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// Variance-reduction gain in the form S_L^2/n_L + S_R^2/n_R - S^2/n.
// The constant sum-of-squares term cancels between parent and children, so
// this is the full SSE reduction of the candidate split.
inline double split_gain(double sl, std::size_t nl, double sr, std::size_t nr, double s,
                         std::size_t n) {
    return sl * sl / static_cast<double>(nl) + sr * sr / static_cast<double>(nr) -
           s * s / static_cast<double>(n);
}

// Midpoint between two consecutive distinct feature values. With adjacent
// doubles the midpoint can round up to the higher value, which would leave
// the right child empty under the <= rule; pin it to the lower value then.
inline double split_threshold(double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return mid < hi ? mid : lo;
}

class TreeFitter {
public:
    TreeFitter(const std::vector<double>& x, std::size_t n_features,
               const std::vector<double>& y, const GbConfig& cfg)
        : x_(x), nf_(n_features), y_(y), cfg_(cfg) {}

    Tree fit(const std::vector<double>& targets) {
        y_override_ = &targets;
        Tree tree;
        std::vector<std::size_t> rows(targets.size());
        std::iota(rows.begin(), rows.end(), 0);
        grow(tree, rows, 0);
        return tree;
    }

private:
    double target(std::size_t row) const { return (*y_override_)[row]; }
    double feat(std::size_t row, int f) const {
        return x_[row * nf_ + static_cast<std::size_t>(f)];
    }

    // rows stay in ascending original order throughout, so every sum over a
    // node visits targets in a reproducible sequence
    int grow(Tree& tree, const std::vector<std::size_t>& rows, int depth) {
        const std::size_t n = rows.size();
        double s = 0.0;
        for (std::size_t r : rows) s += target(r);

        const int idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[static_cast<std::size_t>(idx)].value = s / static_cast<double>(n);

        if (depth >= cfg_.max_depth || n < static_cast<std::size_t>(cfg_.min_samples_split))
            return idx;

        const SplitChoice best = best_split(rows, s);
        if (best.feature < 0) return idx;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows)
            (feat(r, best.feature) <= best.threshold ? left : right).push_back(r);

        tree.nodes[static_cast<std::size_t>(idx)].feature = best.feature;
        tree.nodes[static_cast<std::size_t>(idx)].threshold = best.threshold;
        const int l = grow(tree, left, depth + 1);
        tree.nodes[static_cast<std::size_t>(idx)].left = l;
        const int r = grow(tree, right, depth + 1);
        tree.nodes[static_cast<std::size_t>(idx)].right = r;
        return idx;
    }

    // The gain of a candidate, with the left/right target sums taken in
    // original row order. Different features that induce the same partition
    // then score bit-identically, which is what makes ties well defined.
    double canonical_gain(const std::vector<std::size_t>& rows, double s, int f,
                          double threshold) const {
        double sl = 0.0, sr = 0.0;
        std::size_t nl = 0;
        for (std::size_t r : rows) {
            if (feat(r, f) <= threshold) {
                sl += target(r);
                ++nl;
            } else {
                sr += target(r);
            }
        }
        return split_gain(sl, nl, sr, rows.size() - nl, s, rows.size());
    }

    // Two phases: an O(n log n) sweep with running sums scores every
    // candidate, then the ones within a numerical-noise window of the sweep
    // maximum are re-scored canonically. Candidates are visited in ascending
    // (feature, threshold) order and replace the incumbent only on strictly
    // greater canonical gain, so ties resolve to the lowest feature index,
    // then the lowest threshold.
    SplitChoice best_split(const std::vector<std::size_t>& rows, double s) const {
        const std::size_t n = rows.size();
        candidates_.clear();
        double max_gain = 0.0;
        std::vector<std::size_t> order(rows);
        for (int f = 0; f < static_cast<int>(nf_); ++f) {
            std::copy(rows.begin(), rows.end(), order.begin());
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return feat(a, f) < feat(b, f);
            });
            double sl = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                sl += target(order[k]);
                const double lo = feat(order[k], f);
                const double hi = feat(order[k + 1], f);
                if (lo == hi) continue;
                const std::size_t nl = k + 1;
                const std::size_t nr = n - nl;
                if (nl < static_cast<std::size_t>(cfg_.min_samples_leaf) ||
                    nr < static_cast<std::size_t>(cfg_.min_samples_leaf))
                    continue;
                const double gain = split_gain(sl, nl, s - sl, nr, s, n);
                if (gain <= 0.0) continue;
                max_gain = std::max(max_gain, gain);
                candidates_.push_back({gain, f, split_threshold(lo, hi)});
            }
        }
        if (max_gain <= 0.0) return {};

        // sweep and canonical sums each deviate from the exact gain by a few
        // ulps of the term magnitudes, which sum to gain + 2 s^2/n
        const double window =
            1e-9 * (max_gain + 2.0 * s * s / static_cast<double>(n));
        SplitChoice best;
        for (const SplitChoice& c : candidates_) {
            if (c.gain < max_gain - window) continue;
            const double gain = canonical_gain(rows, s, c.feature, c.threshold);
            if (gain > best.gain) best = {gain, c.feature, c.threshold};
        }
        return best;
    }

    const std::vector<double>& x_;
    std::size_t nf_;
    const std::vector<double>& y_;
    const GbConfig& cfg_;
    const std::vector<double>* y_override_ = nullptr;
    mutable std::vector<SplitChoice> candidates_;
};

}  // namespace detail

struct FitGbResult {
    GbEnsemble ensemble;
    std::vector<double> train_predictions;
};

inline FitGbResult fit_gb_detailed(const std::vector<double>& x, std::size_t n_features,
                                   const std::vector<double>& y, const GbConfig& cfg) {
    cfg.validate();
    if (n_features == 0) throw InputError("gb: n_features must be positive");
    if (x.size() != y.size() * n_features)
        throw InputError("gb: feature matrix does not match target count");
    if (y.size() < 2) throw InputError("gb: need at least 2 training rows");

    const std::size_t n = y.size();
    FitGbResult result;
    result.ensemble.cfg = cfg;
    result.ensemble.n_features = n_features;
    double s = 0.0;
    for (double v : y) s += v;
    result.ensemble.base_prediction = s / static_cast<double>(n);

    std::vector<double>& f = result.train_predictions;
    f.assign(n, result.ensemble.base_prediction);
    std::vector<double> residual(n);
    detail::TreeFitter fitter(x, n_features, y, cfg);
    for (int stage = 0; stage < cfg.n_stages; ++stage) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - f[i];
        Tree tree = fitter.fit(residual);
        for (std::size_t i = 0; i < n; ++i)
            f[i] += cfg.learning_rate * tree.predict_row(&x[i * n_features]);
        result.ensemble.trees.push_back(std::move(tree));
    }
    return result;
}

inline GbEnsemble fit_gb(const std::vector<double>& x, std::size_t n_features,
                         const std::vector<double>& y, const GbConfig& cfg) {
    return fit_gb_detailed(x, n_features, y, cfg).ensemble;
}

inline std::vector<double> predict_gb(const GbEnsemble& ens, const std::vector<double>& x,
                                      std::size_t n_features) {
    if (n_features != ens.n_features)
        throw InputError("gb: feature width does not match the fitted model");
    if (x.size() % n_features != 0) throw InputError("gb: ragged feature matrix");
    const std::size_t n = x.size() / n_features;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ens.predict_row(&x[i * n_features]);
    return out;
}

namespace detail {

inline json tree_node_to_json(const Tree& tree, std::size_t i) {
    const TreeNode& nd = tree.nodes[i];
    if (nd.feature < 0) return json{{"value", double_to_hex(nd.value)}};
    return json{{"feature", nd.feature},
                {"threshold", double_to_hex(nd.threshold)},
                {"left", tree_node_to_json(tree, static_cast<std::size_t>(nd.left))},
                {"right", tree_node_to_json(tree, static_cast<std::size_t>(nd.right))}};
}

inline int tree_node_from_json(const json& j, Tree& tree) {
    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    if (j.contains("value")) {
        tree.nodes[static_cast<std::size_t>(idx)].value =
            hex_to_double(j.at("value").get<std::string>());
        return idx;
    }
    tree.nodes[static_cast<std::size_t>(idx)].feature = j.at("feature").get<int>();
    if (tree.nodes[static_cast<std::size_t>(idx)].feature < 0)
        throw IntegrityError("gb: negative split feature in serialized tree");
    tree.nodes[static_cast<std::size_t>(idx)].threshold =
        hex_to_double(j.at("threshold").get<std::string>());
    const int l = tree_node_from_json(j.at("left"), tree);
    tree.nodes[static_cast<std::size_t>(idx)].left = l;
    const int r = tree_node_from_json(j.at("right"), tree);
    tree.nodes[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

}  // namespace detail

inline json ensemble_to_json(const GbEnsemble& ens) {
    json trees = json::array();
    for (const Tree& t : ens.trees) trees.push_back(detail::tree_node_to_json(t, 0));
    return json{{"config", ens.cfg.to_json()},
                {"n_features", ens.n_features},
                {"base_prediction", double_to_hex(ens.base_prediction)},
                {"trees", std::move(trees)}};
}

inline GbEnsemble ensemble_from_json(const json& j) {
    GbEnsemble ens;
    ens.cfg = GbConfig::from_json(j.at("config"));
    ens.n_features = j.at("n_features").get<std::size_t>();
    if (ens.n_features == 0) throw IntegrityError("gb: serialized model has zero feature width");
    ens.base_prediction = hex_to_double(j.at("base_prediction").get<std::string>());
    for (const json& t : j.at("trees")) {
        Tree tree;
        detail::tree_node_from_json(t, tree);
        if (tree.depth() > ens.cfg.max_depth)
            throw IntegrityError("gb: serialized tree exceeds configured depth");
        ens.trees.push_back(std::move(tree));
    }
    return ens;
}

}  // namespace windcast::gbdt
