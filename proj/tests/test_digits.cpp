#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cbx/digits.hpp"
#include "cbx/errors.hpp"

#include <random>
#include <string>

using namespace cbx;

namespace {

digit_word w(const std::string& s) {
    digit_word out;
    for (char c : s) out.push_back(std::uint8_t(c - '0'));
    return out;
}

bool contains_factor(const digit_word& hay, const digit_word& needle) {
    if (needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < needle.size() && ok; ++k) ok = hay[i + k] == needle[k];
        if (ok) return true;
    }
    return false;
}

} // namespace

TEST_CASE("block enumeration is length-lex and prefix-complete") {
    auto two = enumerate_blocks(2);
    CHECK(two[0].str() == "0");
    CHECK(two[1].str() == "1");

    auto six = enumerate_blocks(6);
    const char* expect6[] = {"0", "1", "00", "01", "10", "11"};
    for (int i = 0; i < 6; ++i) CHECK(six[std::size_t(i)].str() == expect6[i]);

    // first 14 = all blocks of length <= 3, via an independent odometer
    auto got = enumerate_blocks(14);
    std::size_t idx = 0;
    for (int len = 1; len <= 3; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << len); ++v) {
            std::string s;
            for (int b = len - 1; b >= 0; --b) s.push_back(char('0' + ((v >> b) & 1)));
            REQUIRE(idx < got.size());
            CHECK(got[idx].str() == s);
            ++idx;
        }
    }
    CHECK(idx == 14);
}

TEST_CASE("block enumeration is injective and complete per level") {
    // first 2^(L+1)-2 entries are exactly the blocks of length <= L
    for (int L = 1; L <= 6; ++L) {
        auto blocks = enumerate_blocks((std::uint64_t(1) << (L + 1)) - 2);
        std::set<std::string> seen;
        for (auto& b : blocks) {
            CHECK(int(b.size()) <= L);
            seen.insert(b.str());
        }
        CHECK(seen.size() == blocks.size());
    }
}

TEST_CASE("transform examples") {
    CHECK(transform_word(w("110100"), 1) == w("011110"));
    // m'=2: complement first block, copy second, complement third
    digit_word d = w("110100");
    digit_word t = transform_word(d, 2);
    CHECK(t == w("000111"));
}

TEST_CASE("transform is an involution") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int mp = 1 + int(rng() % 3);
        const std::size_t len = 1 + rng() % 40;
        digit_word d;
        for (std::size_t i = 0; i < len; ++i) d.push_back(std::uint8_t(rng() & 1));
        CHECK(transform_word(transform_word(d, mp), mp) == d);
    }
}

TEST_CASE("transform of periodic sequences") {
    // 1^inf -> (01)^inf under m'=1
    digit_sequence ones({}, w("1"));
    auto t = transform_T(ones, 1);
    CHECK(t.str() == "(01)*");
    // involution through the periodic representation
    auto back = transform_T(t, 1);
    CHECK(back.prefix(12) == ones.prefix(12));

    digit_sequence mixed(w("11"), w("01"));
    auto tm = transform_T(mixed, 1);
    CHECK(transform_T(tm, 1).prefix(20) == mixed.prefix(20));
}

TEST_CASE("digit sequence canonical form and io") {
    digit_sequence d(w("11"), w("0101"));
    CHECK(d.tail() == w("01")); // tail stored primitive
    CHECK(d.str() == "11(01)*");
    CHECK(digit_sequence::parse("11(01)*") == d);
    CHECK(digit_sequence::parse("1101").str() == "1101");
    // all-zero tail is a finite word
    CHECK(!digit_sequence(w("10"), w("00")).periodic());
    CHECK_THROWS_AS(digit_sequence::parse("12"), error);
    CHECK_THROWS_AS(digit_sequence::parse("1(01"), error);
    CHECK_THROWS_AS(digit_sequence::parse("1()*"), error);
}

TEST_CASE("padded block recovers the block at every phase") {
    // exhaustive over |B'| <= 6, m' <= 3, all 2m' phases, in nonzero context
    for (int mp = 1; mp <= 3; ++mp) {
        for (std::uint64_t rank = 0; rank < (std::uint64_t(1) << 7) - 2; ++rank) {
            block bp = nth_block(rank);
            block carrier = padded_block(bp, mp);
            for (std::size_t phase = 0; phase < 2 * std::size_t(mp); ++phase) {
                digit_word ambient(phase, 1);
                ambient.insert(ambient.end(), carrier.digits.begin(), carrier.digits.end());
                ambient.insert(ambient.end(), 2, 1);
                CHECK(contains_factor(transform_word(ambient, mp), bp.digits));
            }
        }
    }
}

TEST_CASE("padded block m'=1 basics") {
    block b{w("1")};
    block carrier = padded_block(b, 1);
    // transform of the carrier placed at phase 0 contains [1]
    CHECK(contains_factor(transform_word(carrier.digits, 1), b.digits));
    CHECK_THROWS_AS(padded_block(block{w("101")}, 2, /*allow_pad=*/false), error);
}

TEST_CASE("universality transfer at finite scale") {
    // if a word contains the carrier of B' anywhere, its transform contains B'
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int mp = 1 + int(rng() % 3);
        block bp = nth_block(rng() % 30);
        block carrier = padded_block(bp, mp);
        digit_word word;
        const std::size_t lead = rng() % 9;
        for (std::size_t i = 0; i < lead; ++i) word.push_back(std::uint8_t(rng() & 1));
        word.insert(word.end(), carrier.digits.begin(), carrier.digits.end());
        for (std::size_t i = 0; i < 5; ++i) word.push_back(std::uint8_t(rng() & 1));
        CHECK(contains_factor(transform_word(word, mp), bp.digits));
    }
}

TEST_CASE("is_universal_prefix") {
    CHECK(is_universal_prefix(w("01000110111"), 2));
    CHECK(!is_universal_prefix(w("0000"), 1));
    CHECK(is_universal_prefix(w("01"), 1));
    CHECK(is_universal_prefix(w("01000110111"), 3)); // de Bruijn word
    CHECK(!is_universal_prefix(w("01000110111"), 4));
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(enumerate_blocks(0), error);
    CHECK_THROWS_AS(transform_word(w("10"), 0), error);
    CHECK_THROWS_AS(is_universal_prefix(w("10"), 0), error);
}
