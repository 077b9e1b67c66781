#include "tsaudit/trees.hpp"

#include "tsaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tsaudit {

RegressionForest::RegressionForest(ForestParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {}

namespace {

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

struct BuildContext {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;
    // Per-feature bin edges shared across the tree.
    std::vector<std::vector<double>> edges;
    int min_leaf;
};

SplitResult best_split(const BuildContext& ctx, const std::vector<int>& rows) {
    SplitResult best;
    const int n = static_cast<int>(rows.size());
    double sum = 0.0;
    for (int r : rows) sum += ctx.y(r);
    const double total_sse_base = sum * sum / n;

    const int nf = static_cast<int>(ctx.X.cols());
    for (int f = 0; f < nf; ++f) {
        const auto& edges = ctx.edges[static_cast<std::size_t>(f)];
        if (edges.empty()) continue;
        const int nb = static_cast<int>(edges.size()) + 1;
        std::vector<double> bin_sum(nb, 0.0);
        std::vector<int> bin_cnt(nb, 0);
        for (int r : rows) {
            const double v = ctx.X(r, f);
            const int b = static_cast<int>(
                std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
            bin_sum[b] += ctx.y(r);
            bin_cnt[b] += 1;
        }
        double lsum = 0.0;
        int lcnt = 0;
        for (int b = 0; b + 1 < nb; ++b) {
            lsum += bin_sum[b];
            lcnt += bin_cnt[b];
            const int rcnt = n - lcnt;
            if (lcnt < ctx.min_leaf || rcnt < ctx.min_leaf) continue;
            const double rsum = sum - lsum;
            const double gain = lsum * lsum / lcnt + rsum * rsum / rcnt - total_sse_base;
            if (gain > best.gain + 1e-12) {
                best.gain = gain;
                best.feature = f;
                best.threshold = edges[static_cast<std::size_t>(b)];
            }
        }
    }
    return best;
}

}  // namespace

void RegressionForest::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    trees_.clear();
    const int n = static_cast<int>(X.rows());
    const int nf = static_cast<int>(X.cols());
    std::mt19937_64 rng(seed_);

    BuildContext ctx{X, y, {}, params_.min_leaf};
    ctx.edges.resize(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f) {
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) vals[static_cast<std::size_t>(r)] = X(r, f);
        std::sort(vals.begin(), vals.end());
        auto& edges = ctx.edges[static_cast<std::size_t>(f)];
        for (int b = 1; b < params_.histogram_bins; ++b) {
            const double q = vals[static_cast<std::size_t>(
                std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(n) * b /
                                                  params_.histogram_bins))];
            if (edges.empty() || q > edges.back()) edges.push_back(q);
        }
    }

    const int sub = std::max(params_.min_leaf * 2,
                             static_cast<int>(std::lround(params_.row_subsample * n)));
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);

    for (int t = 0; t < params_.n_trees; ++t) {
        std::vector<int> rows = all;
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.resize(static_cast<std::size_t>(std::min(sub, n)));

        Tree tree;
        // (rows, depth, node index) worklist; nodes are preallocated leaves.
        struct Work {
            std::vector<int> rows;
            int depth;
            int node;
        };
        std::vector<Work> stack;
        tree.nodes.push_back({});
        stack.push_back({std::move(rows), 0, 0});
        while (!stack.empty()) {
            Work w = std::move(stack.back());
            stack.pop_back();
            Node& node = tree.nodes[static_cast<std::size_t>(w.node)];
            double sum = 0.0;
            for (int r : w.rows) sum += y(r);
            node.value = sum / static_cast<double>(w.rows.size());
            if (w.depth >= params_.max_depth ||
                static_cast<int>(w.rows.size()) < 2 * params_.min_leaf)
                continue;
            const auto split = best_split(ctx, w.rows);
            if (split.feature < 0) continue;

            std::vector<int> left, right;
            for (int r : w.rows) {
                if (X(r, split.feature) <= split.threshold)
                    left.push_back(r);
                else
                    right.push_back(r);
            }
            if (static_cast<int>(left.size()) < params_.min_leaf ||
                static_cast<int>(right.size()) < params_.min_leaf)
                continue;

            const int li = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            const int ri = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            Node& parent = tree.nodes[static_cast<std::size_t>(w.node)];
            parent.feature = split.feature;
            parent.threshold = split.threshold;
            parent.left = li;
            parent.right = ri;
            stack.push_back({std::move(left), w.depth + 1, li});
            stack.push_back({std::move(right), w.depth + 1, ri});
        }
        trees_.push_back(std::move(tree));
    }
}

double RegressionForest::predict_tree(const Tree& tree, const Eigen::RowVectorXd& x) const {
    int i = 0;
    while (tree.nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const Node& node = tree.nodes[static_cast<std::size_t>(i)];
        i = x(node.feature) <= node.threshold ? node.left : node.right;
    }
    return tree.nodes[static_cast<std::size_t>(i)].value;
}

Eigen::VectorXd RegressionForest::predict(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
    if (trees_.empty()) return out;
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        double acc = 0.0;
        for (const auto& tree : trees_) acc += predict_tree(tree, X.row(r));
        out(r) = acc / static_cast<double>(trees_.size());
    }
    return out;
}

}  // namespace tsaudit
