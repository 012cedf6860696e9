#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "restrictml/synthesis.hpp"

using namespace restrictml;

namespace {

EnzymeDb ecori_only() {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    return db;
}

struct Fixture {
    EnzymeDb db;
    SiteScanner scanner;

    explicit Fixture(EnzymeDb d) : db(std::move(d)), scanner(db) {}
};

}  // namespace

TEST_CASE("a single cut cannot flank both sides") {
    Fixture fx(ecori_only());
    // one EcoRI site: cut at 2+1=3 only
    const DnaSequence reference("TTGAATTCTT");
    CHECK(find_flanked_fragments(DnaSequence("AATTC"), reference, fx.scanner, fx.db)
              .empty());
}

TEST_CASE("two cuts flank the fragment between them") {
    Fixture fx(ecori_only());
    const DnaSequence reference("GAATTCGAATTC");  // cuts at 1 and 7
    const auto candidates =
        find_flanked_fragments(DnaSequence("AATTCG"), reference, fx.scanner, fx.db);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].start == 1);
    CHECK(candidates[0].end == 7);
    CHECK(candidates[0].left_enzyme == 0);
    CHECK(candidates[0].right_enzyme == 0);
    CHECK(candidates[0].fragment.sequence.str() == "AATTCG");
    CHECK(candidates[0].fragment.left_end.kind == FragmentEnd::Kind::Overhang);
    CHECK(candidates[0].fragment.left_end.strand == FragmentEnd::Strand::Top);
}

TEST_CASE("absent segments yield no candidates") {
    Fixture fx(ecori_only());
    CHECK(find_flanked_fragments(DnaSequence("GGGG"), DnaSequence("GAATTCGAATTC"),
                                 fx.scanner, fx.db)
              .empty());
}

TEST_CASE("candidates agree with an exhaustive cut-pair oracle") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    db.add({"DdeI", "CTNAG", 1, 4});
    Fixture fx(std::move(db));

    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const std::string ref_text = oracles::random_dna(rng, 300);
        const DnaSequence reference(ref_text);

        // oracle: all cut positions via naive matching
        std::set<std::size_t> cuts;
        for (std::size_t e = 0; e < fx.db.size(); ++e) {
            for (const std::size_t p :
                 oracles::naive_find_sites(fx.db[e].site, ref_text)) {
                cuts.insert(p + static_cast<std::size_t>(fx.db[e].cut_top));
            }
        }

        const std::size_t at = rng.below(reference.size() - 20);
        const std::size_t len = 5 + rng.below(15);
        const DnaSequence segment = reference.subseq(at, len);

        std::size_t expected = 0;
        for (std::size_t p = 0; p + segment.size() <= ref_text.size(); ++p) {
            if (ref_text.compare(p, segment.size(), segment.str()) == 0 &&
                cuts.count(p) && cuts.count(p + segment.size())) {
                ++expected;
            }
        }

        const auto candidates =
            find_flanked_fragments(segment, reference, fx.scanner, fx.db);
        CHECK(candidates.size() == expected);
        CHECK(std::is_sorted(candidates.begin(), candidates.end(),
                             [](const CandidateFragment& a, const CandidateFragment& b) {
                                 return a.start < b.start;
                             }));
    }
}

TEST_CASE("labeling needs two distinct cut positions") {
    Fixture fx(ecori_only());
    CHECK(label_subsequence(DnaSequence("GAATTCAAGAATTC"), fx.scanner, fx.db));
    CHECK_FALSE(label_subsequence(DnaSequence("AAAAAA"), fx.scanner, fx.db));
    CHECK_FALSE(label_subsequence(DnaSequence("TTGAATTCTT"), fx.scanner, fx.db));
    CHECK_THROWS_AS(label_subsequence(DnaSequence(""), fx.scanner, fx.db), ValueError);
}

TEST_CASE("labeling matches the brute-force oracle on random windows") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    db.add({"Tsp509I", "AATT", 0, 4});
    db.add({"AvaI", "CYCGRG", 1, 5});
    Fixture fx(std::move(db));

    Rng rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const std::string text = oracles::random_dna(rng, 12 + rng.below(20));
        CHECK(label_subsequence(DnaSequence(text), fx.scanner, fx.db) ==
              oracles::brute_force_applicable(fx.db, text));
    }
}

TEST_CASE("labeling is monotone under extension") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    Fixture fx(std::move(db));

    Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string text = oracles::random_dna(rng, 16 + rng.below(16));
        if (!label_subsequence(DnaSequence(text), fx.scanner, fx.db)) continue;
        const std::string wider =
            oracles::random_dna(rng, rng.below(8)) + text + oracles::random_dna(rng, rng.below(8));
        CHECK(label_subsequence(DnaSequence(wider), fx.scanner, fx.db));
    }
}

TEST_CASE("synthesize covers a fully flanked query in one step") {
    Fixture fx(ecori_only());
    const DnaSequence reference("GAATTCGAATTC");  // cuts at 1, 7
    const DnaSequence query("AATTCG");            // = reference[1..7)
    const auto trace = synthesize(query, reference, fx.scanner, fx.db, 4);
    CHECK(trace.completed);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].query_start == 0);
    CHECK(trace.steps[0].query_end == 6);
    CHECK(trace.steps[0].fragment.start == 1);
    CHECK(trace.uncovered.empty());
}

TEST_CASE("synthesize records unmatched queries as uncovered") {
    Fixture fx(ecori_only());
    const auto trace = synthesize(DnaSequence("TTTT"), DnaSequence("GAACCAAGGA"),
                                  fx.scanner, fx.db, 4);
    CHECK_FALSE(trace.completed);
    CHECK(trace.steps.empty());
    REQUIRE(trace.uncovered.size() == 1);
    CHECK(trace.uncovered[0] == Span{0, 4});
}

TEST_CASE("synthesize chains two known fragments in order") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    Fixture fx(std::move(db));

    // EcoRI cuts GAATTCGAATTC at 1 and 7; HaeIII cuts TTGGCCAAGGCCTT at 4 and 10.
    const DnaSequence reference("GAATTCGAATTCTTGGCCAAGGCCTT");
    // fragment 1 = ref[1..7) = AATTCG, fragment 2 = ref[16..22) = CCAAGG
    const DnaSequence query("AATTCGCCAAGG");
    const auto trace = synthesize(query, reference, fx.scanner, fx.db, 4);
    CHECK(trace.completed);
    REQUIRE(trace.steps.size() == 2);
    CHECK(trace.steps[0].query_start == 0);
    CHECK(trace.steps[0].query_end == 6);
    CHECK(trace.steps[1].query_start == 6);
    CHECK(trace.steps[1].query_end == 12);
    CHECK(trace.steps[1].fragment.left_enzyme == 1);
}

TEST_CASE("traces are sound and tile the query") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    db.add({"Tsp509I", "AATT", 0, 4});
    Fixture fx(std::move(db));

    Rng rng(44);
    for (int trial = 0; trial < 40; ++trial) {
        const DnaSequence reference(oracles::random_dna(rng, 400));
        const DnaSequence query(oracles::random_dna(rng, 60));
        const auto trace = synthesize(query, reference, fx.scanner, fx.db, 4);

        // soundness: each step's fragment sequence equals its query span
        for (const SynthesisStep& step : trace.steps) {
            CHECK(step.fragment.fragment.sequence.str() ==
                  query.subseq(step.query_start, step.query_end - step.query_start).str());
        }

        // partition: steps and uncovered tile [0, |query|)
        std::vector<Span> spans;
        for (const SynthesisStep& step : trace.steps) {
            spans.push_back({step.query_start, step.query_end});
        }
        spans.insert(spans.end(), trace.uncovered.begin(), trace.uncovered.end());
        std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
            return a.start < b.start;
        });
        std::size_t cursor = 0;
        for (const Span& span : spans) {
            CHECK(span.start == cursor);
            CHECK(span.end > span.start);
            cursor = span.end;
        }
        CHECK(cursor == query.size());
        CHECK(trace.completed == trace.uncovered.empty());
    }
}

TEST_CASE("identical inputs give identical traces") {
    Fixture fx(ecori_only());
    Rng rng(45);
    const DnaSequence reference(oracles::random_dna(rng, 300));
    const DnaSequence query(oracles::random_dna(rng, 40));
    const auto a = synthesize(query, reference, fx.scanner, fx.db, 4);
    const auto b = synthesize(query, reference, fx.scanner, fx.db, 4);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].query_start == b.steps[i].query_start);
        CHECK(a.steps[i].fragment.start == b.steps[i].fragment.start);
    }
    CHECK(a.uncovered == b.uncovered);
}

TEST_CASE("trace JSON names the flanking enzymes") {
    Fixture fx(ecori_only());
    const DnaSequence reference("GAATTCGAATTC");
    const auto trace = synthesize(DnaSequence("AATTCG"), reference, fx.scanner, fx.db, 4);
    const std::string json = trace_to_json(trace, "q1", fx.db);
    CHECK(json.find("\"query_id\": \"q1\"") != std::string::npos);
    CHECK(json.find("\"left_enzyme\": \"EcoRI\"") != std::string::npos);
    CHECK(json.find("\"completed\": true") != std::string::npos);
}

TEST_CASE("generate_labeled_entries windows, labels, and deduplicates") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"Tsp509I", "AATT", 0, 4});
    Fixture fx(std::move(db));
    const DnaSequence reference("GAATTCGAATTCGGCCTTAA");

    SUBCASE("single window when gene length equals window length") {
        const std::vector<FastaRecord> genes{{"g1", "", DnaSequence("GAATTCGAAT")}};
        const auto entries =
            generate_labeled_entries(genes, reference, fx.scanner, fx.db, {10});
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].subsequence.str() == "GAATTCGAAT");
        CHECK(entries[0].containing_query_count == 1);
        CHECK(entries[0].gene_id == "g1");
        // EcoRI cut at 1 and Tsp509I (AATT at 1) cut at 1 coincide -> one
        // distinct cut position, so not applicable
        CHECK_FALSE(entries[0].applicable);
        CHECK(entries[0].cutter_count == 2);
    }

    SUBCASE("identical genes count twice in C and deduplicate windows") {
        const std::vector<FastaRecord> genes{{"g1", "", DnaSequence("GAATTCAAGATT")},
                                             {"g2", "", DnaSequence("GAATTCAAGATT")}};
        const auto entries =
            generate_labeled_entries(genes, reference, fx.scanner, fx.db, {8});
        REQUIRE(!entries.empty());
        for (const auto& entry : entries) {
            CHECK(entry.containing_query_count == 2);
            CHECK(entry.gene_id == "g1");  // first provenance kept
        }
        // all windows of g2 are duplicates of g1's
        CHECK(entries.size() == 12 - 8 + 1);
    }

    SUBCASE("labels agree with the brute-force oracle") {
        Rng rng(46);
        const std::vector<FastaRecord> genes{
            {"g1", "", DnaSequence(oracles::random_dna(rng, 200))},
            {"g2", "", DnaSequence(oracles::random_dna(rng, 150))}};
        const auto entries = generate_labeled_entries(genes, reference, fx.scanner,
                                                      fx.db, {12, 16});
        std::size_t audited = 0;
        for (std::size_t i = 0; i < entries.size() && audited < 100; i += 3, ++audited) {
            CHECK(entries[i].applicable ==
                  oracles::brute_force_applicable(fx.db, entries[i].subsequence.str()));
        }
    }
}
