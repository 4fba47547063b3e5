#pragma once

#include "cbx/bases.hpp"
#include "cbx/config.hpp"
#include "cbx/digits.hpp"

#include <complex>
#include <cstdint>
#include <set>
#include <vector>

namespace cbx {

// Which next digits keep the remainder inside the family's tail region.
// The region is exact (necessary and sufficient) for positive real q <= 2,
// negative real p <= 2 and imaginary p <= sqrt(2); for the other families it
// is a necessary disk bound only, so surviving counts are upper bounds.
struct digit_feasibility {
    bool zero = false;
    bool one = false;
    int count() const { return int(zero) + int(one); }
};
digit_feasibility feasible_digits(std::complex<double> remainder, const base_q& q,
                                  double tolerance = 0.0);

// Whether the pruning rule is exact for this base (see above).
bool pruning_exact(const base_q& q);

struct count_result {
    std::uint64_t count = 0;
    bool exact = true; // false when the rule is a necessary bound only
};

// Number of length-`depth` digit words that survive feasibility pruning at
// every step, i.e. feasible expansion prefixes of x in base q.
count_result count_prefixes(std::complex<double> x, const base_q& q, int depth,
                            std::uint64_t node_budget = std::uint64_t(1) << 25);

// Positions (1-based) along a branch-maximizing feasible path where both
// digits were feasible; k positions certify >= 2^k distinct feasible
// prefixes. Requires positive real q in (1, golden ratio) and interior x.
std::vector<int> branching_witness(double x, const base_q& q, int depth, int beam_width = 64);

// Quasi-greedy expansion (digit 1 whenever feasible) in a positive real base.
digit_sequence expand_positive(double x, const base_q& q, int digits_K);

// Expansion of x in a negative base -p: quasi-greedy expansion of
// x + p/(p^2-1) in base p, pushed through the digit transform.
digit_sequence expand_negative_base(double x, const base_q& q, int digits_K);

// Expansion of z in base +-ip by splitting z = q*u + v with u, v expanded in
// base q^2 = -p^2 and the digits interleaved.
digit_sequence expand_imaginary(std::complex<double> z, const base_q& q, int digits_K);

// Backtracking best-first expansion for general complex bases: digit choice
// ordered by |next remainder|, pruned by the containing-disk bound.
struct complex_expand_result {
    bool ok = false;
    digit_word digits;
    int reached_depth = 0;
    std::complex<double> remainder = 0.0; // scaled remainder at the deepest point
    std::uint64_t nodes = 0;
};
complex_expand_result expand_complex_greedy(std::complex<double> z, const base_q& q, int digits_K,
                                            std::uint64_t backtrack_budget = 1'000'000);

// A != {} of odd indices >= 2n+1 indexing one member of the continuum family.
struct subset_family {
    int n = 0;
    std::set<int> members; // odd, >= 2n+1
};

// Least n admissible for radius R in base modulus p:
// p^-(2n+1) + p^-(2n+3) + ... < R (with a small safety factor).
int continuum_min_n(double p, double R);

// One member of the continuum of expansions of z: digit 1 at the odd
// positions in A, 0 at other odd positions, and an expansion of
// w = z - sum_{k in A} q^-k in base q^2 on the even positions.
digit_sequence continuum_family(std::complex<double> z, const base_q& q, double R,
                                const subset_family& family, int digits_K,
                                std::uint64_t backtrack_budget = 1'000'000);

} // namespace cbx
