#include "doctest.h"

#include <set>

#include "proteoknight/error.hpp"
#include "proteoknight/rng.hpp"
#include "proteoknight/sequence.hpp"

using namespace proteoknight;

TEST_CASE("alphabet indices form a bijection onto 0..19") {
    CHECK(residue_index('A') == 0);
    CHECK(residue_index('C') == 1);
    CHECK(residue_index('G') == 5);
    CHECK(residue_index('Y') == 19);
    std::set<int> seen;
    for (char c : kResidues) seen.insert(residue_index(c));
    CHECK(seen.size() == 20);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 19);
    for (char c : std::string("BJOUXZ*-a"))
        CHECK(residue_index(c) == -1);
}

TEST_CASE("wrapped lines are concatenated") {
    const auto seqs = parse_fasta(">s1\nAC\nGT\n");
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].id == "s1");
    CHECK(seqs[0].residues == "ACGT");
    CHECK(seqs[0].length() == 4);
    CHECK(seqs[0].skipped == 0);
}

TEST_CASE("skip policy drops non-standard residues and counts them") {
    const auto seqs = parse_fasta(">s2\nAXA\n", SanitizePolicy::skip);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].residues == "AA");
    CHECK(seqs[0].skipped == 1);
}

TEST_CASE("strict policy rejects non-standard residues") {
    CHECK_THROWS_AS(parse_fasta(">s2\nAXA\n", SanitizePolicy::strict), ParseError);
}

TEST_CASE("empty record body is an error") {
    CHECK_THROWS_AS(parse_fasta(">s3\n\n"), ParseError);
    CHECK_THROWS_AS(parse_fasta(">s3\n>s4\nAC\n"), ParseError);
    // empty after sanitisation
    CHECK_THROWS_AS(parse_fasta(">s5\nXXB\n"), ParseError);
}

TEST_CASE("header edge cases") {
    CHECK_THROWS_AS(parse_fasta(">\nAC\n"), ParseError);
    CHECK_THROWS_AS(parse_fasta(">   \nAC\n"), ParseError);
    const auto seqs = parse_fasta(">sp|P1|X some description\nac\n");
    CHECK(seqs.at(0).id == "sp|P1|X");
    CHECK(seqs.at(0).residues == "AC");
}

TEST_CASE("CRLF input and missing final newline") {
    const auto seqs = parse_fasta(">a\r\nMK\r\nLV\r\n>b\r\nWY");
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[0].residues == "MKLV");
    CHECK(seqs[1].residues == "WY");
}

TEST_CASE("undecodable bytes are reported with their offset") {
    const std::string text = std::string(">a\nAC") + '\xff' + "D\n";
    try {
        parse_fasta(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(parse_fasta(std::string(">a\nA\0C\n", 7)), ParseError);
}

TEST_CASE("data before the first header is an error") {
    CHECK_THROWS_AS(parse_fasta("ACD\n>a\nAC\n"), ParseError);
}

TEST_CASE("format/parse round trip preserves ids and residues") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ProteinSequence> seqs;
        const auto n = 1 + rng.below(6);
        for (std::uint64_t i = 0; i < n; ++i) {
            ProteinSequence s;
            s.id = "seq_" + std::to_string(trial) + "_" + std::to_string(i);
            const auto len = 1 + rng.below(300);
            for (std::uint64_t k = 0; k < len; ++k) s.residues.push_back(kResidues[rng.below(20)]);
            seqs.push_back(std::move(s));
        }
        const auto width = 1 + rng.below(80);
        const auto back = parse_fasta(format_fasta(seqs, width));
        REQUIRE(back.size() == seqs.size());
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            CHECK(back[i].id == seqs[i].id);
            CHECK(back[i].residues == seqs[i].residues);
        }
    }
}

TEST_CASE("skip policy never yields a residue outside the alphabet") {
    Rng rng(11);
    const std::string junk = "ACDEFGHIKLMNPQRSTVWYacdefghiklmnpqrstvwyXBZUOJ*-.123 \t";
    for (int trial = 0; trial < 100; ++trial) {
        std::string body;
        for (int k = 0; k < 200; ++k) body.push_back(junk[rng.below(junk.size())]);
        body += "A";
        const auto seqs = parse_fasta(">r\n" + body + "\n");
        for (char c : seqs.at(0).residues) CHECK(is_residue(c));
    }
}

TEST_CASE("manifest parsing") {
    SUBCASE("binary label") {
        const auto m = load_manifest("s1\tPVP\n");
        REQUIRE(m.size() == 1);
        CHECK(m.at("s1").kind == ClassKind::pvp);
    }
    SUBCASE("multiclass label implies PVP") {
        const auto m = load_manifest("s1\tMajor Tail\n");
        CHECK(m.at("s1").kind == ClassKind::major_tail);
        CHECK(m.at("s1").is_pvp());
        CHECK(m.at("s1").binary_index() == 1);
        CHECK(m.at("s1").multiclass_index() == 5);
    }
    SUBCASE("conflicting duplicate") {
        CHECK_THROWS_AS(load_manifest("s1\tPVP\ns1\tnon-PVP\n"), ParseError);
    }
    SUBCASE("consistent duplicate is fine") {
        CHECK(load_manifest("s1\tPVP\ns1\tPVP\n").size() == 1);
    }
    SUBCASE("comments, blank lines, CRLF") {
        const auto m = load_manifest("# header\n\ns1\tnon-PVP\r\ns2\tPortal\r\n");
        CHECK(m.size() == 2);
        CHECK_FALSE(m.at("s1").is_pvp());
    }
    SUBCASE("malformed and unknown") {
        CHECK_THROWS_AS(load_manifest("s1 PVP\n"), ParseError);
        CHECK_THROWS_AS(load_manifest("s1\tPVP\textra\n"), ParseError);
        CHECK_THROWS_AS(load_manifest("s1\tCapsid\n"), ParseError);
    }
}

TEST_CASE("label names round trip") {
    for (int i = 0; i < kNumMulticlass; ++i) {
        const auto l = multiclass_label(i);
        CHECK(l.multiclass_index() == i);
        CHECK(parse_label(label_name(l)) == l);
    }
    CHECK(parse_label("non-PVP")->binary_index() == 0);
}
