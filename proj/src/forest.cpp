#include "restrictml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "restrictml/rng.hpp"

namespace restrictml {

int DecisionTree::predict(std::span<const double> row) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& node = nodes[at];
        at = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <=
                                              node.threshold
                                          ? node.left
                                          : node.right);
    }
    return nodes[at].leaf_class;
}

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0;
};

double gini(std::size_t n0, std::size_t n1) {
    const double n = static_cast<double>(n0 + n1);
    if (n == 0.0) return 0.0;
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, std::size_t features_per_node,
                std::size_t max_depth, Rng& rng)
        : x_(x), y_(y), features_per_node_(features_per_node), max_depth_(max_depth),
          rng_(rng), feature_pool_(x.cols) {
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
    }

    DecisionTree build(std::vector<std::uint32_t> rows) {
        DecisionTree tree;
        grow(tree, std::move(rows), 1);
        return tree;
    }

private:
    std::int32_t grow(DecisionTree& tree, std::vector<std::uint32_t> rows,
                      std::size_t depth) {
        std::array<std::uint32_t, 2> counts{0, 0};
        for (const std::uint32_t r : rows) {
            ++counts[static_cast<std::size_t>(y_[r])];
        }

        const std::int32_t index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(index)].counts = counts;

        const bool pure = counts[0] == 0 || counts[1] == 0;
        const bool depth_capped = max_depth_ != 0 && depth > max_depth_;
        SplitChoice split;
        if (!pure && !depth_capped) {
            split = choose_split(rows, counts);
        }
        if (!split.found) {
            // Majority leaf; a tie labels conservatively as class 0.
            tree.nodes[static_cast<std::size_t>(index)].leaf_class =
                counts[1] > counts[0] ? 1 : 0;
            return index;
        }

        std::vector<std::uint32_t> left_rows;
        std::vector<std::uint32_t> right_rows;
        for (const std::uint32_t r : rows) {
            (x_.at(r, split.feature) <= split.threshold ? left_rows : right_rows)
                .push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[static_cast<std::size_t>(index)].feature =
            static_cast<int>(split.feature);
        tree.nodes[static_cast<std::size_t>(index)].threshold = split.threshold;
        const std::int32_t left = grow(tree, std::move(left_rows), depth + 1);
        tree.nodes[static_cast<std::size_t>(index)].left = left;
        const std::int32_t right = grow(tree, std::move(right_rows), depth + 1);
        tree.nodes[static_cast<std::size_t>(index)].right = right;
        return index;
    }

    SplitChoice choose_split(const std::vector<std::uint32_t>& rows,
                             const std::array<std::uint32_t, 2>& counts) {
        // Fresh random feature subset for this node.
        for (std::size_t i = 0; i < features_per_node_; ++i) {
            const std::size_t j = i + rng_.below(feature_pool_.size() - i);
            std::swap(feature_pool_[i], feature_pool_[j]);
        }

        SplitChoice best;
        const double parent = gini(counts[0], counts[1]);
        const double total = static_cast<double>(rows.size());

        std::vector<std::pair<double, int>> values(rows.size());
        for (std::size_t fi = 0; fi < features_per_node_; ++fi) {
            const std::size_t feature = feature_pool_[fi];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                values[i] = {x_.at(rows[i], feature), y_[rows[i]]};
            }
            std::sort(values.begin(), values.end());

            std::array<std::size_t, 2> left{0, 0};
            std::array<std::size_t, 2> right{counts[0], counts[1]};
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                ++left[static_cast<std::size_t>(values[i].second)];
                --right[static_cast<std::size_t>(values[i].second)];
                if (values[i].first == values[i + 1].first) continue;

                const double n_left = static_cast<double>(i + 1);
                const double n_right = total - n_left;
                const double impurity = (n_left * gini(left[0], left[1]) +
                                         n_right * gini(right[0], right[1])) /
                                        total;
                if (impurity + 1e-12 < parent &&
                    (!best.found || impurity < best.impurity)) {
                    best.found = true;
                    best.feature = feature;
                    best.threshold =
                        values[i].first + 0.5 * (values[i + 1].first - values[i].first);
                    best.impurity = impurity;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    std::size_t features_per_node_;
    std::size_t max_depth_;
    Rng& rng_;
    std::vector<std::size_t> feature_pool_;
};

}  // namespace

ForestModel forest_train(const Matrix& x, const std::vector<int>& y,
                         const ForestParams& params) {
    if (x.rows == 0 || x.rows != y.size()) {
        throw ValueError("forest_train: rows and labels must align and be nonempty");
    }
    for (const int label : y) {
        if (label != 0 && label != 1) {
            throw ValueError("forest_train: labels must be 0 or 1");
        }
    }

    ForestModel model;
    model.params = params;
    if (model.params.features_per_node == 0) {
        model.params.features_per_node = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(x.cols))));
    }
    if (model.params.features_per_node > x.cols) {
        throw ValueError("forest_train: features_per_node exceeds feature count");
    }
    if (model.params.n_trees == 0) {
        throw ValueError("forest_train: need at least one tree");
    }

    const std::size_t n = x.rows;
    const std::size_t bag_size =
        params.classic_bootstrap ? n : (2 * n + 2) / 3;  // ceil(2n/3)

    for (std::size_t t = 0; t < model.params.n_trees; ++t) {
        Rng rng(model.params.seed, t);
        std::vector<std::uint32_t> bag(bag_size);
        for (std::uint32_t& r : bag) {
            r = static_cast<std::uint32_t>(rng.below(n));
        }
        TreeBuilder builder(x, y, model.params.features_per_node,
                            model.params.max_depth, rng);
        model.bags.push_back(bag);
        model.trees.push_back(builder.build(std::move(bag)));
    }
    model.oob_error = forest_oob_error(model, x, y);
    return model;
}

int forest_predict_row(const ForestModel& model, std::span<const double> row) {
    std::size_t votes1 = 0;
    for (const DecisionTree& tree : model.trees) {
        votes1 += static_cast<std::size_t>(tree.predict(row));
    }
    return 2 * votes1 > model.trees.size() ? 1 : 0;  // tie -> 0
}

std::vector<int> forest_predict(const ForestModel& model, const Matrix& x) {
    std::vector<int> labels(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        labels[r] = forest_predict_row(model, x.row(r));
    }
    return labels;
}

double forest_oob_error(const ForestModel& model, const Matrix& x,
                        const std::vector<int>& y) {
    if (model.bags.size() != model.trees.size()) {
        throw ValueError("forest_oob_error: model carries no bootstrap memberships");
    }
    if (x.rows != y.size()) {
        throw ValueError("forest_oob_error: rows and labels must align");
    }

    std::vector<std::vector<bool>> in_bag(model.trees.size(),
                                          std::vector<bool>(x.rows, false));
    for (std::size_t t = 0; t < model.bags.size(); ++t) {
        for (const std::uint32_t r : model.bags[t]) in_bag[t][r] = true;
    }

    std::size_t evaluated = 0;
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        std::size_t votes1 = 0;
        std::size_t voters = 0;
        for (std::size_t t = 0; t < model.trees.size(); ++t) {
            if (in_bag[t][r]) continue;
            ++voters;
            votes1 += static_cast<std::size_t>(model.trees[t].predict(x.row(r)));
        }
        if (voters == 0) continue;  // never out of bag
        const int vote = 2 * votes1 > voters ? 1 : 0;
        ++evaluated;
        if (vote != y[r]) ++wrong;
    }
    if (evaluated == 0) return 0.0;
    return static_cast<double>(wrong) / static_cast<double>(evaluated);
}

}  // namespace restrictml
