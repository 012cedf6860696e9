#include "restrictml/features.hpp"

#include <string>

namespace restrictml {

namespace {

constexpr int base_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'T': return 1;
        case 'C': return 2;
        case 'G': return 3;
        default:  return -1;  // N
    }
}

double r1_from_counts(const std::array<std::size_t, 4>& counts, std::size_t length) {
    double deviation = 0.0;
    for (const std::size_t count : counts) {
        const double d = 0.25 - static_cast<double>(count) / static_cast<double>(length);
        deviation += d * d;
    }
    return 1.0 - deviation;
}

void check_segment_bounds(const DnaSequence& seq, const ComplexityConfig& cfg) {
    if (cfg.min_segment < 1 || cfg.min_segment > cfg.max_segment) {
        throw ValueError("complexity config requires 1 <= min_segment <= max_segment");
    }
    if (seq.size() < cfg.max_segment) {
        throw ValueError("sequence length " + std::to_string(seq.size()) +
                         " is shorter than max segment size " +
                         std::to_string(cfg.max_segment));
    }
}

// Sum of r1 over all windows of one size, via rolling base counts.
double window_r1_sum(const DnaSequence& seq, std::size_t size) {
    std::array<std::size_t, 4> counts{};
    for (std::size_t j = 0; j < size; ++j) {
        const int b = base_index(seq[j]);
        if (b >= 0) ++counts[static_cast<std::size_t>(b)];
    }
    double sum = r1_from_counts(counts, size);
    for (std::size_t j = size; j < seq.size(); ++j) {
        const int out = base_index(seq[j - size]);
        const int in = base_index(seq[j]);
        if (out >= 0) --counts[static_cast<std::size_t>(out)];
        if (in >= 0) ++counts[static_cast<std::size_t>(in)];
        sum += r1_from_counts(counts, size);
    }
    return sum;
}

}  // namespace

double proportion(char base, const DnaSequence& seq) {
    if (seq.empty()) {
        throw ValueError("proportion of an empty sequence is undefined");
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == base) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(seq.size());
}

double complexity_r1(const DnaSequence& seq) {
    if (seq.empty()) {
        throw ValueError("complexity rating of an empty sequence is undefined");
    }
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int b = base_index(seq[i]);
        if (b >= 0) ++counts[static_cast<std::size_t>(b)];
    }
    return r1_from_counts(counts, seq.size());
}

double complexity_r2(const DnaSequence& seq, const ComplexityConfig& cfg) {
    check_segment_bounds(seq, cfg);
    const double n = static_cast<double>(seq.size());

    double weighted = 0.0;
    double total_weight = 0.0;
    for (std::size_t size = cfg.min_segment; size <= cfg.max_segment; ++size) {
        const double windows = static_cast<double>(seq.size() - size + 1);
        const double mean = window_r1_sum(seq, size) / windows;
        const double weight = static_cast<double>(size) / n;
        weighted += mean * weight;
        total_weight += weight;
    }
    return weighted / total_weight;
}

double complexity_r2_literal(const DnaSequence& seq, const ComplexityConfig& cfg) {
    check_segment_bounds(seq, cfg);
    const double n = static_cast<double>(seq.size());

    double total_weight = 0.0;
    for (std::size_t k = cfg.min_segment; k <= cfg.max_segment; ++k) {
        total_weight += static_cast<double>(k) / n;
    }
    double sum = 0.0;
    for (std::size_t size = cfg.min_segment; size <= cfg.max_segment; ++size) {
        sum += window_r1_sum(seq, size) * (static_cast<double>(size) / n) / total_weight;
    }
    return sum;
}

ReferenceFeatures reference_features(const DnaSequence& reference,
                                     const ComplexityConfig& cfg) {
    ReferenceFeatures out;
    out.props = {proportion('A', reference), proportion('T', reference),
                 proportion('C', reference), proportion('G', reference)};
    out.r1 = complexity_r1(reference);
    out.r2 = complexity_r2(reference, cfg);
    return out;
}

FeatureVector featurize_entry(const SubsequenceEntry& entry, const ComplexityConfig& cfg,
                              std::size_t width) {
    if (!entry.reference) {
        throw ValueError("entry has no reference sequence");
    }
    return featurize_entry(entry, reference_features(*entry.reference, cfg), cfg, width);
}

FeatureVector featurize_entry(const SubsequenceEntry& entry,
                              const ReferenceFeatures& ref,
                              const ComplexityConfig& cfg, std::size_t width) {
    const DnaSequence& sub = entry.subsequence;
    if (sub.size() > width) {
        throw ValueError("subsequence length " + std::to_string(sub.size()) +
                         " exceeds encoding width " + std::to_string(width));
    }

    FeatureVector fv;
    fv.seq_encoded.assign(width, 0.0);  // pad = N ordinal
    for (std::size_t i = 0; i < sub.size(); ++i) {
        fv.seq_encoded[i] = base_ordinal(sub[i]);
    }
    fv.len = static_cast<std::uint32_t>(sub.size());
    fv.sub_props = {proportion('A', sub), proportion('T', sub),
                    proportion('C', sub), proportion('G', sub)};
    fv.ref_props = ref.props;
    fv.sub_r1 = complexity_r1(sub);
    fv.sub_r2 = complexity_r2(sub, cfg);
    fv.ref_r1 = ref.r1;
    fv.ref_r2 = ref.r2;
    fv.c = entry.containing_query_count;
    fv.ezy = entry.cutter_count;
    fv.label = entry.applicable;
    return fv;
}

}  // namespace restrictml
