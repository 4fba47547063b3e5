#include "cbx/digits.hpp"
#include "cbx/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace cbx {

namespace {

void check_digits(const digit_word& w, const char* what) {
    for (auto d : w)
        if (d > 1) fail(errc::invalid_argument, std::string(what) + ": digits must be 0 or 1");
}

// Shortest period dividing |w|.
std::size_t primitive_period(const digit_word& w) {
    for (std::size_t p = 1; p <= w.size(); ++p) {
        if (w.size() % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < w.size() && ok; ++i) ok = (w[i] == w[i % p]);
        if (ok) return p;
    }
    return w.size();
}

} // namespace

digit_sequence::digit_sequence(digit_word head, digit_word tail)
    : head_(std::move(head)), tail_(std::move(tail)) {
    check_digits(head_, "digit_sequence");
    check_digits(tail_, "digit_sequence");
    if (!tail_.empty()) {
        tail_.resize(primitive_period(tail_));
        if (std::all_of(tail_.begin(), tail_.end(), [](std::uint8_t d) { return d == 0; }))
            tail_.clear();
    }
}

std::uint8_t digit_sequence::at(std::size_t k) const {
    if (k == 0) fail(errc::invalid_argument, "digit positions are 1-based");
    if (k <= head_.size()) return head_[k - 1];
    if (tail_.empty()) return 0;
    return tail_[(k - 1 - head_.size()) % tail_.size()];
}

digit_word digit_sequence::prefix(std::size_t k) const {
    digit_word out(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (i < head_.size())
            out[i] = head_[i];
        else if (!tail_.empty())
            out[i] = tail_[(i - head_.size()) % tail_.size()];
    }
    return out;
}

std::string digit_sequence::str() const {
    std::string s;
    s.reserve(head_.size() + tail_.size() + 3);
    for (auto d : head_) s.push_back(char('0' + d));
    if (!tail_.empty()) {
        s.push_back('(');
        for (auto d : tail_) s.push_back(char('0' + d));
        s += ")*";
    }
    return s;
}

digit_sequence digit_sequence::parse(const std::string& text) {
    digit_word head, tail;
    std::size_t i = 0;
    while (i < text.size() && (text[i] == '0' || text[i] == '1'))
        head.push_back(std::uint8_t(text[i++] - '0'));
    if (i < text.size()) {
        if (text[i] != '(') fail(errc::invalid_argument, "bad digit string: " + text);
        ++i;
        while (i < text.size() && (text[i] == '0' || text[i] == '1'))
            tail.push_back(std::uint8_t(text[i++] - '0'));
        if (i + 1 >= text.size() || text[i] != ')' || text[i + 1] != '*' || i + 2 != text.size())
            fail(errc::invalid_argument, "bad digit string: " + text);
        if (tail.empty()) fail(errc::invalid_argument, "empty periodic tail: " + text);
    }
    return digit_sequence(std::move(head), std::move(tail));
}

std::string block::str() const {
    std::string s;
    for (auto d : digits) s.push_back(char('0' + d));
    return s;
}

block nth_block(std::uint64_t k) {
    // Blocks of length L occupy ranks [2^L - 2, 2^(L+1) - 2).
    int len = 1;
    std::uint64_t base = 0, count = 2;
    while (k >= base + count) {
        base += count;
        count <<= 1;
        ++len;
        if (len > 62) fail(errc::invalid_argument, "block rank too large");
    }
    std::uint64_t offset = k - base;
    digit_word d(std::size_t(len), 0);
    for (int i = 0; i < len; ++i)
        d[std::size_t(i)] = std::uint8_t((offset >> (len - 1 - i)) & 1);
    return block{std::move(d)};
}

std::vector<block> enumerate_blocks(std::uint64_t count) {
    if (count < 1) fail(errc::invalid_argument, "enumerate_blocks: count must be >= 1");
    std::vector<block> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(nth_block(k));
    return out;
}

digit_word transform_word(const digit_word& w, int m_prime, std::size_t phase) {
    if (m_prime < 1) fail(errc::invalid_argument, "transform: m_prime must be >= 1");
    check_digits(w, "transform");
    digit_word out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::size_t i = (phase + k) / std::size_t(m_prime); // 0-based block index
        out[k] = (i % 2 == 0) ? std::uint8_t(1 - w[k]) : w[k];
    }
    return out;
}

digit_sequence transform_T(const digit_sequence& d, int m_prime) {
    if (m_prime < 1) fail(errc::invalid_argument, "transform: m_prime must be >= 1");
    const std::size_t period = 2 * std::size_t(m_prime);
    if (!d.periodic()) return digit_sequence(transform_word(d.head(), m_prime));

    // Align head length to a multiple of 2m' by absorbing tail digits, and
    // expand the tail to a multiple of 2m', so both parts transform in place.
    digit_word head = d.head();
    digit_word tail = d.tail();
    std::size_t absorb = (period - head.size() % period) % period;
    for (std::size_t i = 0; i < absorb; ++i) {
        head.push_back(tail[0]);
        std::rotate(tail.begin(), tail.begin() + 1, tail.end());
    }
    digit_word full_tail;
    std::size_t reps = period / std::gcd(period, tail.size());
    for (std::size_t r = 0; r < reps; ++r) full_tail.insert(full_tail.end(), tail.begin(), tail.end());

    return digit_sequence(transform_word(head, m_prime), transform_word(full_tail, m_prime));
}

block padded_block(const block& b_prime, int m_prime, bool allow_pad) {
    if (m_prime < 1) fail(errc::invalid_argument, "padded_block: m_prime must be >= 1");
    if (b_prime.digits.empty()) fail(errc::invalid_argument, "padded_block: empty block");
    digit_word base = b_prime.digits;
    if (base.size() % std::size_t(m_prime) != 0) {
        if (!allow_pad)
            fail(errc::invalid_argument, "padded_block: length not a multiple of m_prime");
        base.resize(base.size() + (std::size_t(m_prime) - base.size() % std::size_t(m_prime)), 0);
    }
    const digit_word x = transform_word(base, m_prime);
    const std::size_t period = 2 * std::size_t(m_prime);
    const std::size_t gap = (period + 1 - x.size() % period) % period; // |X| + gap = 1 mod 2m'

    digit_word out;
    out.reserve(period * x.size() + (period - 1) * gap);
    for (std::size_t c = 0; c < period; ++c) {
        if (c > 0) out.insert(out.end(), gap, 0);
        out.insert(out.end(), x.begin(), x.end());
    }
    return block{std::move(out)};
}

bool is_universal_prefix(const digit_word& w, int max_len) {
    if (max_len < 1 || max_len > 62)
        fail(errc::invalid_argument, "is_universal_prefix: L must be in [1, 62]");
    check_digits(w, "is_universal_prefix");
    for (int len = 1; len <= max_len; ++len) {
        if (std::size_t(len) > w.size()) return false;
        std::unordered_set<std::uint64_t> seen;
        std::uint64_t window = 0;
        const std::uint64_t mask = (std::uint64_t(1) << len) - 1;
        for (std::size_t i = 0; i < w.size(); ++i) {
            window = ((window << 1) | w[i]) & mask;
            if (i + 1 >= std::size_t(len)) seen.insert(window);
        }
        if (seen.size() != (std::uint64_t(1) << len)) return false;
    }
    return true;
}

} // namespace cbx
