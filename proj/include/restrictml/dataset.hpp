#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "restrictml/features.hpp"
#include "restrictml/matrix.hpp"

namespace restrictml {

// A set of labeled feature vectors sharing one SEQ encoding width.
struct LabeledDataset {
    std::size_t seq_width = 0;
    std::vector<FeatureVector> rows;  // every row carries a label

    std::size_t size() const { return rows.size(); }
    std::size_t true_count() const;
    std::size_t false_count() const;
};

// Stratified split sizes and class ratios; the true-class quota is rounded
// half-up, the remainder goes to the false class.
struct SplitSpec {
    std::size_t train_size = 50000;
    double train_true_ratio = 0.60;
    std::size_t test_size = 26622;
    double test_true_ratio = 0.50;
    std::uint64_t seed = 0;
};

// Seeded, reproducible, disjoint train/test sampling at the exact sizes
// and ratios of the spec.  Throws ValueError naming the short class when
// the pool cannot satisfy the quotas.
std::pair<LabeledDataset, LabeledDataset> stratified_sample(const LabeledDataset& pool,
                                                            const SplitSpec& spec);

// Scalar feature columns in file order: n1..nW, len, pa, pt, pc, pg,
// rpa, rpt, rpc, rpg, r1s, r2s, r1r, r2r, c, ezy.
std::vector<std::string> feature_column_names(std::size_t width);
inline std::size_t feature_column_count(std::size_t width) { return width + 15; }

// Rows x (W + 15) matrix of the scalar features, in column-name order.
Matrix feature_matrix(const LabeledDataset& data);
std::vector<int> labels01(const LabeledDataset& data);

// Feature matrix restricted to the encoded SEQ columns (CNN input).
Matrix seq_matrix(const LabeledDataset& data);

// Pairwise Pearson correlations over all feature columns; diagonal 1,
// constant columns correlate 0 with everything by convention.
Matrix correlation_matrix(const LabeledDataset& data);

// Unordered column pairs with |correlation| strictly above the threshold,
// sorted ascending.
std::vector<std::pair<std::size_t, std::size_t>> redundant_pairs(const Matrix& corr,
                                                                 double threshold);

// CSV persistence; decimals carry 17 significant digits so a save/load
// round trip is lossless.  Header: feature columns then `label` in {0,1}.
void save_dataset_csv(const LabeledDataset& data, const std::string& path);
void save_dataset_csv(const LabeledDataset& data, std::ostream& out);
LabeledDataset load_dataset_csv(const std::string& path);
LabeledDataset load_dataset_csv(std::istream& in);

}  // namespace restrictml
