#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "restrictml/dna.hpp"
#include "restrictml/enzyme.hpp"
#include "restrictml/site_scanner.hpp"

namespace restrictml {

// A reference position where some enzyme's top-strand cut lands.  When
// several site occurrences cut at the same position, the one with the
// lowest (enzyme index, site position) is kept.
struct CutPoint {
    std::size_t position = 0;   // cut coordinate, in [0, reference length]
    std::uint32_t enzyme = 0;
    std::size_t site_pos = 0;   // start of the site occurrence producing it
};

// All distinct cut positions in seq, ascending.
std::vector<CutPoint> cut_points(const SiteScanner& scanner, const EnzymeDb& db,
                                 const DnaSequence& seq);

// A reference fragment whose both ends are created by enzyme cuts.
struct CandidateFragment {
    std::size_t start = 0;  // [start, end) in reference coordinates
    std::size_t end = 0;
    std::uint32_t left_enzyme = 0;
    std::uint32_t right_enzyme = 0;
    Fragment fragment;
};

struct SynthesisStep {
    std::size_t query_start = 0;  // [query_start, query_end) covered by this step
    std::size_t query_end = 0;
    CandidateFragment fragment;
};

struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct SynthesisTrace {
    DnaSequence query;
    std::vector<SynthesisStep> steps;
    std::vector<Span> uncovered;  // query spans no flanked fragment covers
    bool completed = false;       // uncovered.empty()
};

struct SubsequenceEntry {
    DnaSequence subsequence;
    std::shared_ptr<const DnaSequence> reference;  // shared context sequence
    bool applicable = false;
    std::uint32_t containing_query_count = 0;  // feature C
    std::uint32_t cutter_count = 0;            // feature EZY
    std::string gene_id;                       // provenance
    std::size_t position = 0;
    std::uint32_t window_length = 0;
};

// Every occurrence of `segment` in `reference` whose span is bounded by an
// enzyme cut on each side, sorted by span start.
std::vector<CandidateFragment> find_flanked_fragments(const DnaSequence& segment,
                                                      const DnaSequence& reference,
                                                      const SiteScanner& scanner,
                                                      const EnzymeDb& db);

// Greedy left-to-right cover of the query with flanked reference fragments:
// at each position take the longest coverable segment (>= min_fragment and
// its first candidate); positions with no coverable segment are recorded
// as uncovered and skipped one base at a time.
SynthesisTrace synthesize(const DnaSequence& query, const DnaSequence& reference,
                          const SiteScanner& scanner, const EnzymeDb& db,
                          std::size_t min_fragment);

// Applicability predicate: the subsequence, treated as its own reference,
// contains a fragment flanked by two enzyme cuts, i.e. it has at least two
// distinct cut positions.
bool label_subsequence(const DnaSequence& subseq, const SiteScanner& scanner,
                       const EnzymeDb& db);

// Slides windows of every given length over every gene and emits one
// labeled entry per distinct subsequence (first provenance wins).
// containing_query_count counts the genes containing the window verbatim.
std::vector<SubsequenceEntry> generate_labeled_entries(
    const std::vector<FastaRecord>& genes, const DnaSequence& reference,
    const SiteScanner& scanner, const EnzymeDb& db,
    const std::vector<std::size_t>& window_lengths);

// JSON trace export: {query_id, steps:[{q_start,q_end,r_start,r_end,
// left_enzyme,right_enzyme}], completed}.  Enzymes are referenced by name.
std::string trace_to_json(const SynthesisTrace& trace, const std::string& query_id,
                          const EnzymeDb& db);

inline const std::vector<std::size_t>& default_window_lengths() {
    static const std::vector<std::size_t> lengths{12, 16, 20, 24};
    return lengths;
}

inline constexpr std::size_t kDefaultMinFragment = 4;

}  // namespace restrictml
