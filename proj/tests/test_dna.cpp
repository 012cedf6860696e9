#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "restrictml/dna.hpp"
#include "restrictml/rng.hpp"

using namespace restrictml;

TEST_CASE("ordinal encoding follows the A/T/C/G/N convention") {
    const auto enc = encode_ordinal(DnaSequence("ATCG"));
    CHECK(enc == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(encode_ordinal(DnaSequence("N")) == std::vector<double>{0.0});
    CHECK(encode_ordinal(DnaSequence("")).empty());
}

TEST_CASE("ordinal encoding is length-preserving with values in the 5-point set") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const DnaSequence seq(oracles::random_dna(rng, rng.below(64), true));
        const auto enc = encode_ordinal(seq);
        REQUIRE(enc.size() == seq.size());
        for (const double v : enc) {
            CHECK((v == 0.0 || v == 0.25 || v == 0.5 || v == 0.75 || v == 1.0));
        }
    }
}

TEST_CASE("iupac_match expands degenerate symbols") {
    CHECK(iupac_match('N', 'A'));
    CHECK(iupac_match('R', 'G'));
    CHECK_FALSE(iupac_match('R', 'C'));
    CHECK(iupac_match('G', 'G'));
    CHECK_FALSE(iupac_match('G', 'A'));
}

TEST_CASE("site symbols never match a text N unless fully degenerate") {
    CHECK(site_symbol_match('N', 'N'));
    CHECK_FALSE(site_symbol_match('G', 'N'));
    CHECK_FALSE(site_symbol_match('R', 'N'));
    CHECK(site_symbol_match('R', 'A'));
}

TEST_CASE("reverse complement handles palindromes, homopolymers, empties") {
    CHECK(reverse_complement(DnaSequence("GAATTC")).str() == "GAATTC");
    CHECK(reverse_complement(DnaSequence("AAAA")).str() == "TTTT");
    CHECK(reverse_complement(DnaSequence("")).str().empty());
}

TEST_CASE("reverse complement is an involution") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const DnaSequence seq(oracles::random_dna(rng, rng.below(80), true));
        CHECK(reverse_complement(reverse_complement(seq)) == seq);
    }
}

TEST_CASE("sequence validation uppercases and rejects junk") {
    CHECK(DnaSequence("acgtn").str() == "ACGTN");
    CHECK_THROWS_AS(DnaSequence("ACGU"), ParseError);
    CHECK_THROWS_AS(DnaSequence("AC-GT"), ParseError);
}

TEST_CASE("parse_fasta basic records") {
    std::istringstream one(">g1\nGAATTC\n");
    const auto records = parse_fasta(one);
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "g1");
    CHECK(records[0].sequence.str() == "GAATTC");

    std::istringstream two(">a\nGA\nAT\n>b\nTTTT\n");
    const auto pair = parse_fasta(two);
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].sequence.str() == "GAAT");
    CHECK(pair[1].sequence.str() == "TTTT");
}

TEST_CASE("parse_fasta reports the offending line") {
    std::istringstream bad(">x\nGAQT\n");
    try {
        parse_fasta(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find('Q') != std::string::npos);
    }

    std::istringstream headerless("GAAT\n");
    CHECK_THROWS_AS(parse_fasta(headerless), ParseError);

    std::istringstream hollow(">empty\n>next\nAC\n");
    CHECK_THROWS_AS(parse_fasta(hollow), ParseError);
}

TEST_CASE("fasta survives a serialize/parse round trip") {
    Rng rng(13);
    std::vector<FastaRecord> records;
    for (int i = 0; i < 5; ++i) {
        records.push_back({"seq" + std::to_string(i), i % 2 ? "desc here" : "",
                           DnaSequence(oracles::random_dna(rng, 150 + rng.below(200)))});
    }
    std::istringstream in(to_fasta(records, 60));
    const auto reparsed = parse_fasta(in);
    REQUIRE(reparsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(reparsed[i].id == records[i].id);
        CHECK(reparsed[i].description == records[i].description);
        CHECK(reparsed[i].sequence == records[i].sequence);
    }
}
