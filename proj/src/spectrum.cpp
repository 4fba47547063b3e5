#include "cbx/spectrum.hpp"
#include "cbx/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace cbx {

namespace {

struct half_entry {
    double value;
    std::uint32_t mask;
    bool operator<(const half_entry& o) const { return value < o.value; }
};

// Sorted subset sums of x^k for k in [first_bit, first_bit + bits).
std::vector<half_entry> build_half(double x, int first_bit, int bits) {
    std::vector<half_entry> out;
    out.reserve(std::size_t(1) << bits);
    out.push_back({0.0, 0});
    for (int b = 0; b < bits; ++b) {
        const double pw = std::pow(x, first_bit + b);
        const std::size_t sz = out.size();
        for (std::size_t i = 0; i < sz; ++i)
            out.push_back({out[i].value + pw, out[i].mask | (std::uint32_t(1) << b)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint8_t> mask_to_coeffs(std::uint64_t mask) {
    std::vector<std::uint8_t> out;
    while (mask) {
        out.push_back(std::uint8_t(mask & 1));
        mask >>= 1;
    }
    return out;
}

// Largest d >= -1 with x^d <= bound. Degrees past 61 exceed the coefficient
// mask width (and any realistic half-list budget).
int max_degree_within(double x, double bound) {
    int d = -1;
    double pw = 1.0;
    while (d < 61 && pw <= bound) {
        ++d;
        pw *= x;
    }
    if (d == 61 && pw <= bound)
        fail(errc::budget_exhausted, "spectrum: required degree exceeds the enumeration budget");
    return d;
}

// Sorted-sum streamer over two half lists (priority queue holding one
// low-list cursor per high value).
class mitm_stream {
public:
    mitm_stream(double x, int degree, std::uint64_t point_cap) {
        const int bits = std::max(degree, -1) + 1;
        low_bits_ = (bits + 1) / 2;
        const int high_bits = bits - low_bits_;
        if ((std::uint64_t(1) << low_bits_) + (std::uint64_t(1) << high_bits) > point_cap)
            fail(errc::budget_exhausted,
                 "spectrum enumeration budget exhausted at degree " + std::to_string(degree));
        lows_ = build_half(x, 0, low_bits_);
        highs_ = build_half(x, low_bits_, high_bits);
        for (std::uint32_t i = 0; i < highs_.size(); ++i)
            heap_.push({highs_[i].value, i, 0});
    }

    struct item {
        double value;
        std::uint32_t high_idx;
        std::uint32_t low_idx;
        bool operator>(const item& o) const { return value > o.value; }
    };

    bool next(double& value, std::uint64_t& mask) {
        if (heap_.empty()) return false;
        item it = heap_.top();
        heap_.pop();
        if (it.low_idx + 1 < lows_.size())
            heap_.push({highs_[it.high_idx].value + lows_[it.low_idx + 1].value, it.high_idx,
                        it.low_idx + 1});
        value = it.value;
        mask = (std::uint64_t(highs_[it.high_idx].mask) << low_bits_) | lows_[it.low_idx].mask;
        return true;
    }

private:
    int low_bits_;
    std::vector<half_entry> lows_, highs_;
    std::priority_queue<item, std::vector<item>, std::greater<item>> heap_;
};

} // namespace

std::string spectrum_point::coeff_bits() const {
    std::string s;
    for (auto c : coeffs) s.push_back(char('0' + c));
    if (s.empty()) s = "0";
    return s;
}

std::vector<spectrum_point> enumerate_spectrum(const spectrum_query& cfg) {
    if (!(cfg.x > 1.0) || cfg.x > 2.0)
        fail(errc::invalid_argument, "spectrum: x must satisfy 1 < x <= 2");
    if (cfg.value_bound.has_value() == cfg.count_bound.has_value())
        fail(errc::invalid_argument, "spectrum: set exactly one of value_bound/count_bound");
    if (cfg.dedup_tolerance < 0) fail(errc::invalid_argument, "spectrum: negative dedup tolerance");
    if (cfg.value_bound && !(*cfg.value_bound > 0))
        fail(errc::invalid_argument, "spectrum: value_bound must be positive");
    if (cfg.count_bound && *cfg.count_bound == 0)
        fail(errc::invalid_argument, "spectrum: count_bound must be positive");

    int degree = cfg.value_bound ? max_degree_within(cfg.x, *cfg.value_bound) : 8;

    for (;;) {
        std::vector<spectrum_point> out;
        mitm_stream stream(cfg.x, degree, cfg.point_cap);
        const double complete_up_to = std::pow(cfg.x, degree + 1);
        double v;
        std::uint64_t mask;
        std::uint64_t popped = 0;
        while (stream.next(v, mask)) {
            if (++popped > cfg.point_cap)
                fail(errc::budget_exhausted, "spectrum point cap exceeded");
            if (cfg.value_bound && v > *cfg.value_bound * (1.0 + 1e-15)) break;
            if (!cfg.value_bound && v >= complete_up_to) break;
            if (!out.empty() &&
                v - out.back().value <= cfg.dedup_tolerance * std::max(1.0, std::abs(v)))
                continue; // merged into the existing representative
            out.push_back({v, mask_to_coeffs(mask)});
            if (cfg.count_bound && out.size() == *cfg.count_bound) return out;
        }
        if (cfg.value_bound) return out;
        degree += 4; // count mode: deepen until enough complete points exist
    }
}

bracket_result bracket(double x, double target, double gap_goal, std::uint64_t point_cap) {
    if (!(x > 1.0) || x > 2.0) fail(errc::invalid_argument, "bracket: x must satisfy 1 < x <= 2");
    if (!(target > 0)) fail(errc::invalid_argument, "bracket: target must be positive");
    if (!(gap_goal > 0)) fail(errc::invalid_argument, "bracket: gap_goal must be positive");

    // The predecessor has degree <= max_degree_within(target); the successor
    // may additionally use the first power above the target.
    const int degree = max_degree_within(x, target) + 1;
    const int bits = degree + 1;
    const int low_bits = (bits + 1) / 2;
    const int high_bits = bits - low_bits;
    if ((std::uint64_t(1) << low_bits) + (std::uint64_t(1) << high_bits) > point_cap)
        fail(errc::budget_exhausted,
             "bracket: half-list budget exhausted at degree " + std::to_string(degree));
    auto lows = build_half(x, 0, low_bits);
    auto highs = build_half(x, low_bits, high_bits);
    std::vector<double> low_vals(lows.size());
    for (std::size_t i = 0; i < lows.size(); ++i) low_vals[i] = lows[i].value;

    double best_lo = -1.0, best_hi = std::numeric_limits<double>::infinity();
    std::uint64_t mask_lo = 0, mask_hi = 0;
    for (const auto& h : highs) {
        auto it = std::lower_bound(low_vals.begin(), low_vals.end(), target - h.value);
        if (h.value < target && it != low_vals.begin()) {
            // predecessor: largest h + low strictly below target
            const auto idx = std::size_t(it - low_vals.begin()) - 1;
            const double v = h.value + low_vals[idx];
            if (v < target && v > best_lo) {
                best_lo = v;
                mask_lo = (std::uint64_t(h.mask) << low_bits) | lows[idx].mask;
            }
        }
        if (it != low_vals.end()) {
            // successor: smallest h + low at or above target
            const auto idx = std::size_t(it - low_vals.begin());
            const double v = h.value + low_vals[idx];
            if (v >= target && v < best_hi) {
                best_hi = v;
                mask_hi = (std::uint64_t(h.mask) << low_bits) | lows[idx].mask;
            }
        }
    }
    if (best_lo < 0) { best_lo = 0.0; mask_lo = 0; } // y_0 = 0 sits below any positive target

    bracket_result res;
    res.lower = {best_lo, mask_to_coeffs(mask_lo)};
    res.upper = {best_hi, mask_to_coeffs(mask_hi)};
    res.gap_ok = (res.upper.value - res.lower.value) < gap_goal;
    return res;
}

double max_gap(double x, double window_lo, double window_hi, std::uint64_t point_cap) {
    if (!(x > 1.0) || x > 2.0) fail(errc::invalid_argument, "max_gap: x must satisfy 1 < x <= 2");
    if (!(window_lo >= 0) || !(window_hi > window_lo))
        fail(errc::invalid_argument, "max_gap: need 0 <= a < b");

    // One power above the window keeps the straddling pair in the stream.
    const int degree = max_degree_within(x, window_hi) + 1;
    mitm_stream stream(x, degree, point_cap);
    double prev = 0.0, v = 0.0, best = 0.0;
    std::uint64_t mask, popped = 0;
    bool have_prev = false;
    while (stream.next(v, mask)) {
        if (++popped > point_cap) fail(errc::budget_exhausted, "max_gap point cap exceeded");
        if (have_prev && v > prev) {
            if (prev > window_lo && v <= window_hi) best = std::max(best, v - prev);
            if (prev >= window_hi) break;
            prev = v;
        } else if (!have_prev) {
            prev = v;
            have_prev = true;
        }
    }
    return best;
}

double second_pisot() {
    static const double root = [] {
        double r = 1.38;
        for (int i = 0; i < 64; ++i) {
            const double f = ((r - 1.0) * r - 0.0) * r * r - 1.0; // r^4 - r^3 - 1
            const double df = (4.0 * r - 3.0) * r * r;
            r -= f / df;
        }
        return r;
    }();
    return root;
}

std::optional<spectrum_point> find_in_window(double x, double lo, double hi, double prefer,
                                             int max_degree, std::uint64_t node_budget) {
    if (!(x > 1.0)) fail(errc::invalid_argument, "find_in_window: x must be > 1");
    if (!(hi > 0) || !(hi > lo)) return std::nullopt;

    // Powers of x usable inside the window (any chosen power must stay below hi).
    std::vector<double> pows;
    double pw = 1.0;
    const std::size_t degree_cap = std::size_t(1) << 22;
    while (int(pows.size()) <= max_degree && pw < hi) {
        if (pows.size() >= degree_cap) return std::nullopt; // x too close to 1 for this budget
        pows.push_back(pw);
        pw *= x;
    }
    const int k_top = int(pows.size()) - 1;
    if (k_top < 0) {
        if (lo < 0.0) return spectrum_point{0.0, {}};
        return std::nullopt;
    }
    std::vector<double> prefix_max(pows.size() + 1, 0.0); // sum of powers 0..k-1
    for (std::size_t k = 0; k < pows.size(); ++k) prefix_max[k + 1] = prefix_max[k] + pows[k];

    std::vector<std::uint8_t> taken(pows.size(), 0);
    struct frame {
        int k;
        double sum; // sum before this level's choice
        std::array<std::uint8_t, 2> order;
        int next;
    };
    auto make_frame = [&](int k, double sum) {
        frame f{k, sum, {1, 0}, 0};
        if (sum + pows[std::size_t(k)] > prefer) f.order = {0, 1};
        return f;
    };
    std::vector<frame> stack;
    stack.reserve(pows.size());
    stack.push_back(make_frame(k_top, 0.0));

    std::uint64_t nodes = 0;
    while (!stack.empty()) {
        frame& f = stack.back();
        if (f.next == 2) {
            stack.pop_back();
            continue;
        }
        if (++nodes > node_budget) return std::nullopt;
        const std::uint8_t choice = f.order[std::size_t(f.next++)];
        const double sum = f.sum + (choice ? pows[std::size_t(f.k)] : 0.0);
        taken[std::size_t(f.k)] = choice;
        if (sum >= hi) continue;                             // overshoot
        if (sum + prefix_max[std::size_t(f.k)] <= lo) continue; // cannot reach the window
        if (f.k == 0) {
            if (sum > lo && sum < hi) {
                std::vector<std::uint8_t> coeffs(taken.begin(), taken.end());
                while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
                return spectrum_point{sum, std::move(coeffs)};
            }
            continue;
        }
        stack.push_back(make_frame(f.k - 1, sum));
    }
    return std::nullopt;
}

} // namespace cbx
