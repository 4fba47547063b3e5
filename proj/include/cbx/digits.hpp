#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cbx {

using digit_word = std::vector<std::uint8_t>; // entries are 0 or 1

// A {0,1} digit sequence: a finite head, optionally followed by a finite
// block repeated forever. No tail means the word is finite (implicit 0^inf).
// Canonical form: the tail is primitive (not a power of a shorter word) and
// an all-zero tail is dropped.
class digit_sequence {
public:
    digit_sequence() = default;
    explicit digit_sequence(digit_word head, digit_word tail = {});

    const digit_word& head() const noexcept { return head_; }
    const digit_word& tail() const noexcept { return tail_; }
    bool periodic() const noexcept { return !tail_.empty(); }
    std::size_t head_size() const noexcept { return head_.size(); }

    // Digit at 1-based position k (periodic continuation; 0 past a finite word).
    std::uint8_t at(std::size_t k) const;

    // First k digits as a flat word.
    digit_word prefix(std::size_t k) const;

    bool operator==(const digit_sequence& other) const = default;

    // "head(tail)*" notation, e.g. "11(01)*"; plain digits for finite words.
    std::string str() const;
    static digit_sequence parse(const std::string& text);

private:
    digit_word head_;
    digit_word tail_;
};

// Nonempty finite block of 0/1 digits.
struct block {
    digit_word digits;
    std::size_t size() const noexcept { return digits.size(); }
    bool operator==(const block&) const = default;
    std::string str() const;
};

// First `count` blocks in length-then-lexicographic order:
// 0, 1, 00, 01, 10, 11, 000, ...  Every finite block appears exactly once.
std::vector<block> enumerate_blocks(std::uint64_t count);

// The k-th block (0-based) of the same enumeration.
block nth_block(std::uint64_t k);

// Block-parity transform: with positions 1-based and i = (pos-1)/m_prime,
// digits in even-indexed blocks are complemented, odd-indexed blocks are
// copied. Involution. m_prime = 1 gives (1-c1, c2, 1-c3, c4, ...).
digit_word transform_word(const digit_word& w, int m_prime, std::size_t phase = 0);
digit_sequence transform_T(const digit_sequence& d, int m_prime);

// Carrier block for universality transfer: a word B such that whenever B
// occurs in w at any phase, transform of w contains b_prime. Built from
// 2*m_prime copies of X = transform(b_prime padded to a multiple of m_prime)
// separated by zero gaps that step the copy phases through every residue
// mod 2*m_prime, so one copy always lands complement-aligned.
block padded_block(const block& b_prime, int m_prime, bool allow_pad = true);

// True iff every block of length <= max_len occurs as a factor of w.
bool is_universal_prefix(const digit_word& w, int max_len);

} // namespace cbx
