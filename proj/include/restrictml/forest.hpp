#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "restrictml/matrix.hpp"

namespace restrictml {

// Flat binary tree; feature < 0 marks a leaf.  Leaf class is the argmax of
// the training counts with ties going to class 0 (inapplicable).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t leaf_class = 0;
    std::array<std::uint32_t, 2> counts{0, 0};
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict(std::span<const double> row) const;
};

struct ForestParams {
    std::size_t n_trees = 30;
    std::size_t features_per_node = 0;  // 0: ceil(sqrt(d))
    std::size_t max_depth = 0;          // 0: unlimited
    std::uint64_t seed = 0;
    // Bag size ceil(2n/3) drawn with replacement; `classic_bootstrap`
    // switches to the conventional n-sized bootstrap instead.
    bool classic_bootstrap = false;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    ForestParams params;
    double oob_error = 0.0;
    // Bootstrap membership per tree; kept in memory for OOB accounting,
    // not serialized.
    std::vector<std::vector<std::uint32_t>> bags;
};

// Bagged Gini trees over seeded per-tree streams: each node evaluates a
// fresh random feature subset and splits at midpoints between adjacent
// distinct values.  Deterministic for a given seed.
ForestModel forest_train(const Matrix& x, const std::vector<int>& y,
                         const ForestParams& params);

// Majority vote across trees; ties classify as 0.
std::vector<int> forest_predict(const ForestModel& model, const Matrix& x);
int forest_predict_row(const ForestModel& model, std::span<const double> row);

// Fraction of rows misclassified by the vote of only those trees whose
// bootstrap excluded the row; rows in every bag are skipped.
double forest_oob_error(const ForestModel& model, const Matrix& x,
                        const std::vector<int>& y);

}  // namespace restrictml
