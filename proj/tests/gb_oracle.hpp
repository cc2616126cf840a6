#pragma once

// Brute-force reference for the boosted-tree fitter. Every candidate split
// is scored from scratch by partitioning the node's rows, with no sweep or
// incremental bookkeeping, so agreement with the production fitter is
// evidence rather than shared code.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <vector>

#include "windcast/gbdt.hpp"

namespace gboracle {

struct Node {
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    std::unique_ptr<Node> left, right;
};

struct Dataset {
    const std::vector<double>& x;
    std::size_t nf;

    double feat(std::size_t row, int f) const {
        return x[row * nf + static_cast<std::size_t>(f)];
    }
};

inline double node_sum(const Dataset& d, const std::vector<std::size_t>& rows,
                       const std::vector<double>& y) {
    (void)d;
    double s = 0.0;
    for (std::size_t r : rows) s += y[r];
    return s;
}

inline std::unique_ptr<Node> fit_node(const Dataset& d, const std::vector<std::size_t>& rows,
                                      const std::vector<double>& y,
                                      const windcast::gbdt::GbConfig& cfg, int depth) {
    auto node = std::make_unique<Node>();
    const std::size_t n = rows.size();
    const double s = node_sum(d, rows, y);
    node->value = s / static_cast<double>(n);
    if (depth >= cfg.max_depth || n < static_cast<std::size_t>(cfg.min_samples_split))
        return node;

    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (int f = 0; f < static_cast<int>(d.nf); ++f) {
        std::vector<double> values;
        values.reserve(n);
        for (std::size_t r : rows) values.push_back(d.feat(r, f));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            const double mid = 0.5 * (values[k] + values[k + 1]);
            const double threshold = mid < values[k + 1] ? mid : values[k];
            double sl = 0.0;
            std::size_t nl = 0;
            for (std::size_t r : rows) {
                if (d.feat(r, f) <= threshold) {
                    sl += y[r];
                    ++nl;
                }
            }
            const std::size_t nr = n - nl;
            if (nl < static_cast<std::size_t>(cfg.min_samples_leaf) ||
                nr < static_cast<std::size_t>(cfg.min_samples_leaf))
                continue;
            double sr = 0.0;
            for (std::size_t r : rows)
                if (!(d.feat(r, f) <= threshold)) sr += y[r];
            const double gain = sl * sl / static_cast<double>(nl) +
                                sr * sr / static_cast<double>(nr) -
                                s * s / static_cast<double>(n);
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = f;
                best_threshold = threshold;
            }
        }
    }
    if (best_feature < 0) return node;

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows)
        (d.feat(r, best_feature) <= best_threshold ? lrows : rrows).push_back(r);
    node->feature = best_feature;
    node->threshold = best_threshold;
    node->left = fit_node(d, lrows, y, cfg, depth + 1);
    node->right = fit_node(d, rrows, y, cfg, depth + 1);
    return node;
}

inline double predict_node(const Node& node, const double* row) {
    if (node.feature < 0) return node.value;
    return predict_node(row[node.feature] <= node.threshold ? *node.left : *node.right, row);
}

struct Ensemble {
    double base = 0.0;
    std::vector<std::unique_ptr<Node>> trees;
};

inline Ensemble fit_ensemble(const std::vector<double>& x, std::size_t nf,
                             const std::vector<double>& y,
                             const windcast::gbdt::GbConfig& cfg) {
    const Dataset d{x, nf};
    const std::size_t n = y.size();
    Ensemble ens;
    double s = 0.0;
    for (double v : y) s += v;
    ens.base = s / static_cast<double>(n);

    std::vector<double> f(n, ens.base);
    std::vector<double> residual(n);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int stage = 0; stage < cfg.n_stages; ++stage) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - f[i];
        auto tree = fit_node(d, all, residual, cfg, 0);
        for (std::size_t i = 0; i < n; ++i)
            f[i] += cfg.learning_rate * predict_node(*tree, &x[i * nf]);
        ens.trees.push_back(std::move(tree));
    }
    return ens;
}

// Structural comparison: identical topology, split features, bit-identical
// thresholds and leaf values. Returns a path string on mismatch, empty on
// agreement.
inline std::string compare_trees(const windcast::gbdt::Tree& got, std::size_t gi,
                                 const Node& want, const std::string& path) {
    const auto& gn = got.nodes[gi];
    if (want.feature < 0) {
        if (gn.feature >= 0) return path + ": expected leaf, got split";
        if (gn.value != want.value) return path + ": leaf value differs";
        return "";
    }
    if (gn.feature < 0) return path + ": expected split, got leaf";
    if (gn.feature != want.feature) return path + ": split feature differs";
    if (gn.threshold != want.threshold) return path + ": threshold differs";
    std::string err = compare_trees(got, static_cast<std::size_t>(gn.left), *want.left,
                                    path + "L");
    if (!err.empty()) return err;
    return compare_trees(got, static_cast<std::size_t>(gn.right), *want.right, path + "R");
}

inline std::string compare_ensembles(const windcast::gbdt::GbEnsemble& got,
                                     const Ensemble& want) {
    if (got.base_prediction != want.base) return "base prediction differs";
    if (got.trees.size() != want.trees.size()) return "stage count differs";
    for (std::size_t i = 0; i < got.trees.size(); ++i) {
        std::string err =
            compare_trees(got.trees[i], 0, *want.trees[i], "stage" + std::to_string(i) + ":");
        if (!err.empty()) return err;
    }
    return "";
}

}  // namespace gboracle
