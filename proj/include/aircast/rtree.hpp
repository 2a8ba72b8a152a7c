#pragma once

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/split.hpp"

namespace aircast {

struct TreeConfig {
    int max_depth = 4;
    int min_samples_leaf = 3;
    double min_sse_reduction = 1e-9;
};

/// A node is internal when both children are set, otherwise a leaf holding
/// the mean training target of its rows.
struct TreeNode {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left, right;
    double prediction = 0.0;
    std::size_t count = 0;

    bool is_leaf() const { return !left; }
};

struct SplitChoice {
    std::size_t feature = 0;
    double threshold = 0.0;
    double sse_reduction = 0.0;
};

namespace detail {

inline double subset_sse(const std::vector<double>& y, const std::vector<std::size_t>& idx) {
    double mean = 0.0;
    for (std::size_t i : idx) mean += y[i];
    mean /= static_cast<double>(idx.size());
    double ss = 0.0;
    for (std::size_t i : idx) {
        double d = y[i] - mean;
        ss += d * d;
    }
    return ss;
}

}  // namespace detail

/// Exhaustive search over features and midpoints between consecutive distinct
/// sorted values. Ties resolve to the lowest feature index, then the lowest
/// threshold (guaranteed by scan order with a strict improvement test).
inline std::optional<SplitChoice> best_split(const Mat& x, const std::vector<double>& y,
                                             const std::vector<std::size_t>& idx,
                                             int min_samples_leaf = 1) {
    if (idx.size() < 2) return std::nullopt;
    const double parent_sse = detail::subset_sse(y, idx);

    std::optional<SplitChoice> best;
    std::vector<std::size_t> order = idx;
    for (std::size_t f = 0; f < x.cols; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return x(a, f) < x(b, f);
        });

        // Prefix sums over the sorted order give each candidate split in O(1).
        double left_sum = 0.0, left_sq = 0.0;
        double total_sum = 0.0, total_sq = 0.0;
        for (std::size_t i : order) {
            total_sum += y[i];
            total_sq += y[i] * y[i];
        }
        const auto n = static_cast<double>(order.size());
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            double yi = y[order[k]];
            left_sum += yi;
            left_sq += yi * yi;
            double lo = x(order[k], f), hi = x(order[k + 1], f);
            if (lo == hi) continue;  // not a boundary between distinct values
            auto nl = static_cast<double>(k + 1);
            double nr = n - nl;
            if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
            double sse_l = left_sq - left_sum * left_sum / nl;
            double rs = total_sum - left_sum, rq = total_sq - left_sq;
            double sse_r = rq - rs * rs / nr;
            double reduction = parent_sse - (sse_l + sse_r);
            if (reduction > 1e-12 && (!best || reduction > best->sse_reduction))
                best = SplitChoice{f, 0.5 * (lo + hi), reduction};
        }
    }
    return best;
}

namespace detail {

inline std::unique_ptr<TreeNode> grow(const Mat& x, const std::vector<double>& y,
                                      std::vector<std::size_t> idx, int depth,
                                      const TreeConfig& cfg) {
    auto node = std::make_unique<TreeNode>();
    node->count = idx.size();
    double mean = 0.0;
    for (std::size_t i : idx) mean += y[i];
    node->prediction = mean / static_cast<double>(idx.size());

    if (depth >= cfg.max_depth || idx.size() < 2 * static_cast<std::size_t>(cfg.min_samples_leaf))
        return node;
    auto split = best_split(x, y, idx, cfg.min_samples_leaf);
    if (!split || split->sse_reduction < cfg.min_sse_reduction) return node;

    std::vector<std::size_t> li, ri;
    for (std::size_t i : idx)
        (x(i, split->feature) <= split->threshold ? li : ri).push_back(i);

    node->feature = split->feature;
    node->threshold = split->threshold;
    node->left = grow(x, y, std::move(li), depth + 1, cfg);
    node->right = grow(x, y, std::move(ri), depth + 1, cfg);
    return node;
}

}  // namespace detail

/// Greedy CART growth on raw (unscaled) features; fully deterministic.
inline TreeNode fit_tree(const Dataset& ds, const SplitPlan& plan, const TreeConfig& cfg = {}) {
    if (cfg.max_depth < 0 || cfg.min_samples_leaf < 1 || cfg.min_sse_reduction < 0.0)
        throw BadConfig("fit_tree: bad tree configuration");
    if (plan.train_idx.empty()) throw TooFewRows("fit_tree: empty training set");
    auto root = detail::grow(ds.predictors, ds.target, plan.train_idx, 0, cfg);
    return std::move(*root);
}

inline double predict_tree(const TreeNode& root, const std::vector<double>& x) {
    const TreeNode* node = &root;
    while (!node->is_leaf()) {
        if (node->feature >= x.size())
            throw DimensionMismatch("predict_tree: feature index out of range");
        node = x[node->feature] <= node->threshold ? node->left.get() : node->right.get();
    }
    return node->prediction;
}

namespace detail {

inline void dump_tree(const TreeNode& node, int indent, std::ostringstream& out) {
    char buf[96];
    for (int i = 0; i < indent; ++i) out << "  ";
    if (node.is_leaf()) {
        std::snprintf(buf, sizeof buf, "leaf predict=%.17g count=%zu", node.prediction,
                      node.count);
        out << buf << "\n";
    } else {
        std::snprintf(buf, sizeof buf, "if x[%zu] <= %.17g", node.feature, node.threshold);
        out << buf << "\n";
        dump_tree(*node.left, indent + 1, out);
        dump_tree(*node.right, indent + 1, out);
    }
}

}  // namespace detail

/// Indented outline, one node per line; doubles as the model dump.
inline std::string serialize(const TreeNode& root) {
    std::ostringstream out;
    out << "model rtree\n";
    detail::dump_tree(root, 0, out);
    return out.str();
}

}  // namespace aircast
