#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "restrictml/site_scanner.hpp"

using namespace restrictml;

namespace {

EnzymeDb one_enzyme() {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    return db;
}

EnzymeDb overlap_pair() {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"Tsp509I", "AATT", 0, 4});
    return db;
}

std::set<std::pair<std::size_t, std::size_t>> as_set(const std::vector<SiteHit>& hits) {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (const SiteHit& h : hits) s.emplace(h.position, h.enzyme_index);
    return s;
}

}  // namespace

TEST_CASE("empty catalog scans to nothing") {
    const SiteScanner scanner((EnzymeDb()));
    CHECK(scanner.scan_all(DnaSequence("GAATTCGAATTC")).empty());
    CHECK(scanner.count_cutters(DnaSequence("GAATTC")) == 0);
}

TEST_CASE("singleton catalog reduces to find_sites") {
    const EnzymeDb db = one_enzyme();
    const SiteScanner scanner(db);

    const auto hits = scanner.scan_all(DnaSequence("GAATTC"));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].enzyme_index == 0);
    CHECK(hits[0].position == 0);

    CHECK(scanner.scan_all(DnaSequence("")).empty());

    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const DnaSequence seq(oracles::random_dna(rng, 200, true));
        const auto scan = scanner.scan_all(seq);
        const auto direct = find_sites(db[0], seq);
        REQUIRE(scan.size() == direct.size());
        for (std::size_t i = 0; i < scan.size(); ++i) {
            CHECK(scan[i].position == direct[i]);
        }
    }
}

TEST_CASE("overlapping patterns from different enzymes are all reported") {
    const SiteScanner scanner(overlap_pair());
    const auto hits = scanner.scan_all(DnaSequence("GAATTC"));
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].position == 0);  // EcoRI
    CHECK(hits[0].enzyme_index == 0);
    CHECK(hits[1].position == 1);  // AATT inside the site
    CHECK(hits[1].enzyme_index == 1);
}

TEST_CASE("scan_all equals the union of per-enzyme naive scans") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"DdeI", "CTNAG", 1, 4});
    db.add({"AvaI", "CYCGRG", 1, 5});
    db.add({"Tsp509I", "AATT", 0, 4});
    db.add({"XmnI", "GAANNNNTTC", 5, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    const SiteScanner scanner(db);

    Rng rng(32);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::string text = oracles::random_dna(rng, 80 + rng.below(200), true);
        CHECK(as_set(scanner.scan_all(DnaSequence(text))) ==
              oracles::naive_scan_all(db, text));
    }
}

TEST_CASE("count_cutters requires the whole site inside the window") {
    const SiteScanner scanner(one_enzyme());
    CHECK(scanner.count_cutters(DnaSequence("TTGAATTCTT")) == 1);
    CHECK(scanner.count_cutters(DnaSequence("GAATT")) == 0);
}

TEST_CASE("count_cutters counts distinct enzymes and matches the oracle") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"Tsp509I", "AATT", 0, 4});
    db.add({"HaeIII", "GGCC", 2, 2});
    const SiteScanner scanner(db);

    // two EcoRI sites still count once
    CHECK(scanner.count_cutters(DnaSequence("GAATTCGAATTC")) == 2);

    Rng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string text = oracles::random_dna(rng, 50, true);
        std::set<std::size_t> distinct;
        for (const auto& [pos, enzyme] : oracles::naive_scan_all(db, text)) {
            distinct.insert(enzyme);
        }
        CHECK(scanner.count_cutters(DnaSequence(text)) == distinct.size());
    }
}

TEST_CASE("every cutter of a window cuts any extension of it") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"HaeIII", "GGCC", 2, 2});
    db.add({"DdeI", "CTNAG", 1, 4});
    const SiteScanner scanner(db);

    Rng rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string text = oracles::random_dna(rng, 60);
        const std::string wider = "ACGT" + text + "TGCA";
        CHECK(scanner.count_cutters(DnaSequence(text)) <=
              scanner.count_cutters(DnaSequence(wider)));
        CHECK(scanner.count_cutters(DnaSequence(text)) <= db.size());
    }
}

TEST_CASE("scanner construction is deterministic") {
    EnzymeDb db;
    db.add({"EcoRI", "GAATTC", 1, 5});
    db.add({"DdeI", "CTNAG", 1, 4});
    const SiteScanner a(db);
    const SiteScanner b(db);
    Rng rng(35);
    for (int trial = 0; trial < 50; ++trial) {
        const DnaSequence seq(oracles::random_dna(rng, 150, true));
        CHECK(a.scan_all(seq) == b.scan_all(seq));
    }
}
