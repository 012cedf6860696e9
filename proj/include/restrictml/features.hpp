#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "restrictml/dna.hpp"
#include "restrictml/synthesis.hpp"

namespace restrictml {

// Segment-size bounds [min_segment, max_segment] for the windowed
// complexity rating (b and p).
struct ComplexityConfig {
    std::size_t min_segment = 4;
    std::size_t max_segment = 8;
};

// Fraction of positions holding `base` (A/C/G/T); N counts in the
// denominator but never the numerator.
double proportion(char base, const DnaSequence& seq);

// Whole-sequence complexity rating: 1 - sum over A,T,C,G of
// (1/4 - proportion)^2.  Range [0.25, 1]; 1 exactly at equal composition.
double complexity_r1(const DnaSequence& seq);

// Windowed complexity rating: for each segment size i in
// [min_segment, max_segment], the mean r1 over all n-i+1 windows of size i,
// weighted by i/n and normalized by the total weight, which keeps the
// value in [0.25, 1] and collapses to r1 when b = p = n.
double complexity_r2(const DnaSequence& seq, const ComplexityConfig& cfg);

// Verbatim-formula variant that sums (rather than averages) the window
// ratings; grows past 1 for long sequences.  Kept for comparison only.
double complexity_r2_literal(const DnaSequence& seq, const ComplexityConfig& cfg);

// The 16-variable representation of one entry: the fixed-width encoded
// subsequence (SEQ), its length (LEN), per-base proportions of the
// subsequence and of the reference, both complexity ratings of each, and
// the C and EZY counts.
struct FeatureVector {
    std::vector<double> seq_encoded;      // width W, zero-padded on the right
    std::uint32_t len = 0;                // pre-padding length
    std::array<double, 4> sub_props{};    // A, T, C, G
    std::array<double, 4> ref_props{};
    double sub_r1 = 0.0;
    double sub_r2 = 0.0;
    double ref_r1 = 0.0;
    double ref_r2 = 0.0;
    std::uint32_t c = 0;
    std::uint32_t ezy = 0;
    std::optional<bool> label;

    bool operator==(const FeatureVector&) const = default;
};

inline constexpr std::size_t kDefaultSeqWidth = 24;

// Reference-side features, computed once per shared reference.
struct ReferenceFeatures {
    std::array<double, 4> props{};
    double r1 = 0.0;
    double r2 = 0.0;
};

ReferenceFeatures reference_features(const DnaSequence& reference,
                                     const ComplexityConfig& cfg);

FeatureVector featurize_entry(const SubsequenceEntry& entry, const ComplexityConfig& cfg,
                              std::size_t width);

// Batch variant with precomputed reference features (they are identical
// for every entry sharing one reference).
FeatureVector featurize_entry(const SubsequenceEntry& entry,
                              const ReferenceFeatures& ref,
                              const ComplexityConfig& cfg, std::size_t width);

}  // namespace restrictml
