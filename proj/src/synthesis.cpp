#include "restrictml/synthesis.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace restrictml {

std::vector<CutPoint> cut_points(const SiteScanner& scanner, const EnzymeDb& db,
                                 const DnaSequence& seq) {
    std::vector<CutPoint> cuts;
    for (const SiteHit& hit : scanner.scan_all(seq)) {
        const Enzyme& enzyme = db[hit.enzyme_index];
        cuts.push_back({hit.position + static_cast<std::size_t>(enzyme.cut_top),
                        hit.enzyme_index, hit.position});
    }
    std::sort(cuts.begin(), cuts.end(), [](const CutPoint& a, const CutPoint& b) {
        if (a.position != b.position) return a.position < b.position;
        if (a.enzyme != b.enzyme) return a.enzyme < b.enzyme;
        return a.site_pos < b.site_pos;
    });
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](const CutPoint& a, const CutPoint& b) {
                               return a.position == b.position;
                           }),
               cuts.end());
    return cuts;
}

namespace {

// Sorted-vector lookup of a cut at an exact position.
const CutPoint* cut_at(const std::vector<CutPoint>& cuts, std::size_t position) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), position,
                                     [](const CutPoint& c, std::size_t p) {
                                         return c.position < p;
                                     });
    if (it == cuts.end() || it->position != position) return nullptr;
    return &*it;
}

CandidateFragment make_candidate(const DnaSequence& reference, std::size_t start,
                                 std::size_t end, const CutPoint& left,
                                 const CutPoint& right, const EnzymeDb& db) {
    CandidateFragment cand;
    cand.start = start;
    cand.end = end;
    cand.left_enzyme = left.enzyme;
    cand.right_enzyme = right.enzyme;
    cand.fragment.sequence = reference.subseq(start, end - start);
    cand.fragment.source_start = start;
    cand.fragment.source_end = end;
    cand.fragment.left_end = cut_ends(db[left.enzyme], reference, left.site_pos).second;
    cand.fragment.right_end = cut_ends(db[right.enzyme], reference, right.site_pos).first;
    return cand;
}

std::vector<CandidateFragment> flanked_with_cuts(const DnaSequence& segment,
                                                 const DnaSequence& reference,
                                                 const std::vector<CutPoint>& cuts,
                                                 const EnzymeDb& db) {
    std::vector<CandidateFragment> candidates;
    if (segment.empty() || segment.size() > reference.size()) return candidates;

    const std::string& hay = reference.str();
    const std::string& needle = segment.str();
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + 1)) {
        const CutPoint* left = cut_at(cuts, at);
        const CutPoint* right = cut_at(cuts, at + needle.size());
        if (left && right) {
            candidates.push_back(
                make_candidate(reference, at, at + needle.size(), *left, *right, db));
        }
    }
    return candidates;
}

}  // namespace

std::vector<CandidateFragment> find_flanked_fragments(const DnaSequence& segment,
                                                      const DnaSequence& reference,
                                                      const SiteScanner& scanner,
                                                      const EnzymeDb& db) {
    if (segment.empty()) {
        throw ValueError("find_flanked_fragments: segment is empty");
    }
    return flanked_with_cuts(segment, reference, cut_points(scanner, db, reference), db);
}

SynthesisTrace synthesize(const DnaSequence& query, const DnaSequence& reference,
                          const SiteScanner& scanner, const EnzymeDb& db,
                          std::size_t min_fragment) {
    if (min_fragment < 1) {
        throw ValueError("synthesize: min_fragment must be >= 1");
    }
    SynthesisTrace trace;
    trace.query = query;

    const std::vector<CutPoint> cuts = cut_points(scanner, db, reference);

    std::size_t pos = 0;
    std::size_t uncovered_start = 0;
    bool in_gap = false;
    auto close_gap = [&](std::size_t end) {
        if (in_gap) {
            trace.uncovered.push_back({uncovered_start, end});
            in_gap = false;
        }
    };

    while (pos < query.size()) {
        bool stepped = false;
        const std::size_t longest = std::min(query.size() - pos, reference.size());
        for (std::size_t len = longest; len >= min_fragment; --len) {
            const DnaSequence segment = query.subseq(pos, len);
            auto candidates = flanked_with_cuts(segment, reference, cuts, db);
            if (!candidates.empty()) {
                close_gap(pos);
                trace.steps.push_back({pos, pos + len, std::move(candidates.front())});
                pos += len;
                stepped = true;
                break;
            }
        }
        if (!stepped) {
            if (!in_gap) {
                uncovered_start = pos;
                in_gap = true;
            }
            ++pos;
        }
    }
    close_gap(query.size());
    trace.completed = trace.uncovered.empty();
    return trace;
}

bool label_subsequence(const DnaSequence& subseq, const SiteScanner& scanner,
                       const EnzymeDb& db) {
    if (subseq.empty()) {
        throw ValueError("label_subsequence: subsequence is empty");
    }
    // Two strictly ordered cut positions bound a nonempty candidate fragment.
    return cut_points(scanner, db, subseq).size() >= 2;
}

std::vector<SubsequenceEntry> generate_labeled_entries(
    const std::vector<FastaRecord>& genes, const DnaSequence& reference,
    const SiteScanner& scanner, const EnzymeDb& db,
    const std::vector<std::size_t>& window_lengths) {
    for (const std::size_t len : window_lengths) {
        if (len < 1) throw ValueError("window lengths must be >= 1");
    }

    auto shared_reference = std::make_shared<const DnaSequence>(reference);
    std::vector<SubsequenceEntry> entries;
    std::unordered_set<std::string> seen;

    for (const FastaRecord& gene : genes) {
        for (const std::size_t len : window_lengths) {
            if (gene.sequence.size() < len) continue;
            for (std::size_t at = 0; at + len <= gene.sequence.size(); ++at) {
                DnaSequence window = gene.sequence.subseq(at, len);
                if (!seen.insert(window.str()).second) continue;

                SubsequenceEntry entry;
                entry.applicable = label_subsequence(window, scanner, db);
                entry.cutter_count =
                    static_cast<std::uint32_t>(scanner.count_cutters(window));
                std::uint32_t containing = 0;
                for (const FastaRecord& g : genes) {
                    if (g.sequence.contains(window)) ++containing;
                }
                entry.containing_query_count = containing;
                entry.subsequence = std::move(window);
                entry.reference = shared_reference;
                entry.gene_id = gene.id;
                entry.position = at;
                entry.window_length = static_cast<std::uint32_t>(len);
                entries.push_back(std::move(entry));
            }
        }
    }
    return entries;
}

std::string trace_to_json(const SynthesisTrace& trace, const std::string& query_id,
                          const EnzymeDb& db) {
    nlohmann::ordered_json doc;
    doc["query_id"] = query_id;
    doc["steps"] = nlohmann::ordered_json::array();
    for (const SynthesisStep& step : trace.steps) {
        doc["steps"].push_back({{"q_start", step.query_start},
                                {"q_end", step.query_end},
                                {"r_start", step.fragment.start},
                                {"r_end", step.fragment.end},
                                {"left_enzyme", db[step.fragment.left_enzyme].name},
                                {"right_enzyme", db[step.fragment.right_enzyme].name}});
    }
    doc["completed"] = trace.completed;
    return doc.dump(2);
}

}  // namespace restrictml
