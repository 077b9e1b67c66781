#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace tsaudit {

struct ForestParams {
    int n_trees = 100;
    int max_depth = 6;
    double row_subsample = 0.8;
    int min_leaf = 5;
    int histogram_bins = 32;
};

// Bagged regression trees with histogram split search. Deterministic given
// the seed; randomness comes from per-tree row subsampling only.
class RegressionForest {
public:
    RegressionForest(ForestParams params, std::uint64_t seed);

    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

private:
    struct Node {
        int feature = -1;     // -1 marks a leaf
        double threshold = 0.0;
        double value = 0.0;
        int left = -1;
        int right = -1;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    double predict_tree(const Tree& tree, const Eigen::RowVectorXd& x) const;

    ForestParams params_;
    std::uint64_t seed_;
    std::vector<Tree> trees_;
};

}  // namespace tsaudit
