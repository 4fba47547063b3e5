#pragma once

#include "cbx/config.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cbx {

// One value y = P(x) of a 0/1-coefficient polynomial, with its witnessing
// coefficient vector (coeffs[k] multiplies x^k).
struct spectrum_point {
    double value = 0.0;
    std::vector<std::uint8_t> coeffs;

    std::string coeff_bits() const;
};

struct spectrum_query {
    double x = 2.0;                        // evaluation point, 1 < x <= 2
    std::optional<double> value_bound;     // enumerate values <= bound
    std::optional<std::uint64_t> count_bound; // or: first `count` points
    double dedup_tolerance = 1e-12;        // merge radius tol*max(1,|y|)
    std::uint64_t point_cap = std::uint64_t(1) << 24;
};

// Sorted strictly-increasing spectrum 0 = y_0 < y_1 < ... of x, starting at
// the empty polynomial. Values closer than the dedup radius are merged into
// the first representative. Complete up to the requested bound.
std::vector<spectrum_point> enumerate_spectrum(const spectrum_query& cfg);

// Consecutive spectrum points around a target: lower.value < target <= upper.value.
// gap_ok reports whether upper - lower < gap_goal (callers retry with more
// digits when it is not).
struct bracket_result {
    spectrum_point lower, upper;
    bool gap_ok = true;
    double gap() const { return upper.value - lower.value; }
};
bracket_result bracket(double x, double target, double gap_goal,
                       std::uint64_t point_cap = std::uint64_t(1) << 24);

// Max consecutive gap y_{k+1}-y_k over pairs inside the window: a < y_k and
// y_{k+1} <= b.
double max_gap(double x, double window_lo, double window_hi,
               std::uint64_t point_cap = std::uint64_t(1) << 24);

// The second-smallest Pisot number, the root of x^4 = x^3 + 1 (~1.3802776).
double second_pisot();

// Best-first digit-prefix search: a spectrum point of x with degree <= max
// degree and value inside the open window (lo, hi), preferring values close
// to `prefer`. This is the incremental fallback behind the suffix-extension
// driver, where exact consecutive bracketing is out of reach.
std::optional<spectrum_point> find_in_window(double x, double lo, double hi, double prefer,
                                             int max_degree, std::uint64_t node_budget);

} // namespace cbx
