#include "cbx/expansions.hpp"
#include "cbx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cbx {

namespace {

constexpr double golden = 1.6180339887498948482;

// Tail region test shared by all searches. `tol` absorbs float drift.
bool remainder_admissible(std::complex<double> r, const base_q& q, double tol) {
    const double p = q.p();
    switch (q.family()) {
        case base_family::positive_real:
            return std::abs(r.imag()) <= tol && r.real() >= -tol &&
                   r.real() <= 1.0 / (p - 1.0) + tol;
        case base_family::negative_real:
            return std::abs(r.imag()) <= tol && r.real() >= -p / (p * p - 1.0) - tol &&
                   r.real() <= 1.0 / (p * p - 1.0) + tol;
        case base_family::imaginary: {
            const region reg = jq_bounds(q);
            return reg.contains(r, tol);
        }
        default:
            return std::abs(r) <= 1.0 / (p - 1.0) + tol;
    }
}

double region_extent(const base_q& q) {
    const double p = q.p();
    switch (q.family()) {
        case base_family::positive_real: return 1.0 / (p - 1.0);
        case base_family::negative_real: return (p + 1.0) / (p * p - 1.0);
        case base_family::imaginary: return 2.0 / (p - 1.0);
        default: return 2.0 / (p - 1.0);
    }
}

} // namespace

bool pruning_exact(const base_q& q) {
    const double p = q.p();
    switch (q.family()) {
        case base_family::positive_real: return p <= 2.0;
        case base_family::negative_real: return p <= 2.0;
        case base_family::imaginary: return p <= std::sqrt(2.0);
        default: return false;
    }
}

digit_feasibility feasible_digits(std::complex<double> remainder, const base_q& q, double tolerance) {
    const std::complex<double> shifted = q.q() * remainder;
    return {remainder_admissible(shifted, q, tolerance),
            remainder_admissible(shifted - 1.0, q, tolerance)};
}

count_result count_prefixes(std::complex<double> x, const base_q& q, int depth,
                            std::uint64_t node_budget) {
    if (depth < 1 || depth > 128) fail(errc::invalid_argument, "count_prefixes: bad depth");
    const std::complex<double> qc = q.q();
    const double base_tol = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max({1.0, std::abs(x), region_extent(q)});

    struct node {
        std::complex<double> r;
        int depth;
        double tol;
    };
    std::vector<node> stack;
    if (!remainder_admissible(x, q, base_tol)) return {0, pruning_exact(q)};
    stack.push_back({x, 0, base_tol});

    std::uint64_t count = 0, nodes = 0;
    const double growth = q.p();
    while (!stack.empty()) {
        node cur = stack.back();
        stack.pop_back();
        if (++nodes > node_budget) fail(errc::budget_exhausted, "count_prefixes: node budget");
        if (cur.depth == depth) {
            ++count;
            continue;
        }
        const std::complex<double> shifted = qc * cur.r;
        const double tol = cur.tol * growth + base_tol;
        if (remainder_admissible(shifted, q, tol)) stack.push_back({shifted, cur.depth + 1, tol});
        if (remainder_admissible(shifted - 1.0, q, tol))
            stack.push_back({shifted - 1.0, cur.depth + 1, tol});
    }
    return {count, pruning_exact(q)};
}

std::vector<int> branching_witness(double x, const base_q& q, int depth, int beam_width) {
    if (q.family() != base_family::positive_real || !(q.p() < golden))
        fail(errc::precondition, "branching_witness: q must be positive real in (1, golden ratio)");
    const double p = q.p();
    const double bound = 1.0 / (p - 1.0);
    if (!(x > 0.0) || !(x < bound))
        fail(errc::out_of_range, "branching_witness: x must be interior to (0, 1/(q-1))");
    if (depth < 1) fail(errc::invalid_argument, "branching_witness: bad depth");

    const double base_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, bound);
    struct state {
        double r;
        double tol;
        std::vector<int> branches;
    };
    std::vector<state> beam{{x, base_tol, {}}};
    for (int step = 1; step <= depth; ++step) {
        std::vector<state> next;
        next.reserve(beam.size() * 2);
        for (const auto& s : beam) {
            const double shifted = p * s.r;
            const double tol = s.tol * p + base_tol;
            const bool ok0 = shifted >= -tol && shifted <= bound + tol;
            const bool ok1 = shifted - 1.0 >= -tol && shifted - 1.0 <= bound + tol;
            auto child = [&](double r) {
                state c{r, tol, s.branches};
                if (ok0 && ok1) c.branches.push_back(step);
                next.push_back(std::move(c));
            };
            if (ok1) child(shifted - 1.0);
            if (ok0) child(shifted);
        }
        std::sort(next.begin(), next.end(), [](const state& a, const state& b) {
            if (a.branches.size() != b.branches.size()) return a.branches.size() > b.branches.size();
            return a.r < b.r;
        });
        if (int(next.size()) > beam_width) next.resize(std::size_t(beam_width));
        if (next.empty()) break;
        beam = std::move(next);
    }
    return beam.empty() ? std::vector<int>{} : beam.front().branches;
}

namespace {

// Quasi-greedy expansion in a positive real base, carried in long double so
// boundary orbits stay digit-stable to depth ~50 even for p close to 2.
// `slack` absorbs the caller's rounding of x; the walk starts clamped.
digit_word greedy_positive(long double x, long double p, int digits_K, double slack,
                           bool* in_range) {
    const long double bound = 1.0L / (p - 1.0L);
    const long double tol = (long double)slack + 1e3L * std::numeric_limits<long double>::epsilon() *
                                                     std::max<long double>(1.0L, bound);
    if (in_range) *in_range = (x >= -tol && x <= bound + tol);
    long double r = std::min(std::max(x, 0.0L), bound);
    digit_word out(std::size_t(digits_K), 0);
    for (int k = 0; k < digits_K; ++k) {
        const long double shifted = p * r;
        if (shifted >= 1.0L) {
            out[std::size_t(k)] = 1;
            r = shifted - 1.0L;
        } else {
            out[std::size_t(k)] = 0;
            r = shifted;
        }
    }
    return out;
}

} // namespace

digit_sequence expand_positive(double x, const base_q& q, int digits_K) {
    if (q.family() != base_family::positive_real)
        fail(errc::invalid_argument, "expand_positive: base must be positive real");
    if (digits_K < 1) fail(errc::invalid_argument, "expand_positive: K must be >= 1");
    bool ok = false;
    digit_word d = greedy_positive(x, q.p(), digits_K, 0.0, &ok);
    if (!ok) fail(errc::out_of_range, "expand_positive: x outside [0, 1/(q-1)]");
    return digit_sequence(std::move(d));
}

digit_sequence expand_negative_base(double x, const base_q& q, int digits_K) {
    if (q.family() != base_family::negative_real)
        fail(errc::invalid_argument, "expand_negative_base: base must be negative real");
    if (digits_K < 1) fail(errc::invalid_argument, "expand_negative_base: K must be >= 1");
    const long double p = q.p();
    const long double image = (long double)x + p / (p * p - 1.0L);
    // A caller computing x from the p/(p^2-1) formulas in double carries a
    // cancellation-amplified error of order eps * p^3/(p^2-1)^2; admit it.
    const double den = double(p * p - 1.0L);
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, double(p * p * p) / (den * den));
    bool ok = false;
    digit_word d = greedy_positive(image, p, digits_K, slack, &ok);
    if (!ok)
        fail(errc::out_of_range, "expand_negative_base: x + p/(p^2-1) outside [0, 1/(p-1)]");
    return digit_sequence(transform_word(d, 1));
}

digit_sequence expand_imaginary(std::complex<double> z, const base_q& q, int digits_K) {
    if (q.family() != base_family::imaginary)
        fail(errc::invalid_argument, "expand_imaginary: base must be purely imaginary");
    if (digits_K < 1) fail(errc::invalid_argument, "expand_imaginary: K must be >= 1");
    const double p = q.p();
    const double sign = q.rot_num() == 1 ? 1.0 : -1.0; // q = sign * i * p
    const double u = z.imag() / (sign * p);
    const double v = z.real();

    const base_q qsq = q.squared(); // -p^2
    const int odd_count = (digits_K + 1) / 2;
    const int even_count = digits_K / 2;
    digit_word du = expand_negative_base(u, qsq, std::max(odd_count, 1)).head();
    digit_word dv = even_count > 0 ? expand_negative_base(v, qsq, even_count).head() : digit_word{};

    digit_word out(std::size_t(digits_K), 0);
    for (int k = 0; k < digits_K; ++k)
        out[std::size_t(k)] = (k % 2 == 0) ? du[std::size_t(k / 2)] : dv[std::size_t(k / 2)];
    return digit_sequence(std::move(out));
}

complex_expand_result expand_complex_greedy(std::complex<double> z, const base_q& q, int digits_K,
                                            std::uint64_t backtrack_budget) {
    if (digits_K < 1) fail(errc::invalid_argument, "expand_complex_greedy: K must be >= 1");
    const double p = q.p();
    const double bound = 1.0 / (p - 1.0);
    const double cushion = 1e-9 * std::max(1.0, bound);
    const std::complex<double> qc = q.q();

    complex_expand_result res;
    if (std::abs(z) > bound + cushion) {
        res.remainder = z;
        return res; // outside the universal disk: immediate failure
    }

    struct frame {
        std::complex<double> r; // remainder before this level's choice
        std::uint8_t order[2];
        int next;
    };
    std::vector<frame> stack;
    stack.reserve(std::size_t(digits_K));
    digit_word digits(std::size_t(digits_K), 0);
    auto make_frame = [&](std::complex<double> r) {
        frame f{r, {0, 1}, 0};
        if (std::abs(qc * r - 1.0) < std::abs(qc * r)) {
            f.order[0] = 1;
            f.order[1] = 0;
        }
        return f;
    };
    stack.push_back(make_frame(z));
    int deepest = 0;
    std::complex<double> deepest_r = z;
    digit_word deepest_prefix; // snapshot: later backtracking rewrites `digits`

    while (!stack.empty()) {
        frame& f = stack.back();
        if (f.next == 2) {
            stack.pop_back();
            continue;
        }
        if (++res.nodes > backtrack_budget) {
            res.reached_depth = deepest;
            res.remainder = deepest_r;
            res.digits = deepest_prefix;
            return res; // budget exhausted: report the deepest prefix
        }
        const std::uint8_t c = f.order[f.next++];
        const std::complex<double> r2 = qc * f.r - double(c);
        if (std::abs(r2) > bound + cushion) continue;
        const int depth = int(stack.size()); // this level's 1-based digit index
        digits[std::size_t(depth - 1)] = c;
        if (depth > deepest) {
            deepest = depth;
            deepest_r = r2;
            deepest_prefix.assign(digits.begin(), digits.begin() + depth);
        }
        if (depth == digits_K) {
            res.ok = true;
            res.reached_depth = depth;
            res.remainder = r2;
            res.digits = digits;
            return res;
        }
        stack.push_back(make_frame(r2));
    }
    res.reached_depth = deepest;
    res.remainder = deepest_r;
    res.digits = deepest_prefix;
    return res;
}

int continuum_min_n(double p, double R) {
    if (!(p > 1.0)) fail(errc::invalid_argument, "continuum_min_n: p must be > 1");
    if (!(R > 0.0)) fail(errc::invalid_argument, "continuum_min_n: R must be positive");
    const double geom = 1.0 - 1.0 / (p * p);
    for (int n = 0; n < 10'000'000; ++n) {
        if (std::pow(p, -(2.0 * n + 1.0)) / geom < R * (1.0 - 1e-6)) return n;
    }
    fail(errc::budget_exhausted, "continuum_min_n: no admissible n found");
}

digit_sequence continuum_family(std::complex<double> z, const base_q& q, double R,
                                const subset_family& family, int digits_K,
                                std::uint64_t backtrack_budget) {
    if (digits_K < 2) fail(errc::invalid_argument, "continuum_family: K must be >= 2");
    if (std::abs(z) > R) fail(errc::out_of_range, "continuum_family: |z| > R");
    for (int k : family.members) {
        if (k % 2 == 0 || k < 2 * family.n + 1)
            fail(errc::invalid_argument, "continuum_family: members must be odd and >= 2n+1");
        if (k > digits_K)
            fail(errc::invalid_argument, "continuum_family: member exceeds digit budget");
    }
    if (family.n < continuum_min_n(q.p(), R))
        fail(errc::invalid_argument, "continuum_family: n too small for the tail bound");

    std::complex<double> w = z;
    for (int k : family.members) w -= q.q_pow(-k);
    if (std::abs(w) > 2.0 * R * (1.0 + 1e-9))
        fail(errc::construction_failed, "continuum_family: shifted target left C_2R");

    auto even = expand_complex_greedy(w, q.squared(), digits_K / 2, backtrack_budget);
    if (!even.ok)
        fail(errc::construction_failed,
             "continuum_family: base q^2 expansion failed at depth " +
                 std::to_string(even.reached_depth));

    digit_word out(std::size_t(digits_K), 0);
    for (int k = 2; k <= digits_K; k += 2) out[std::size_t(k - 1)] = even.digits[std::size_t(k / 2 - 1)];
    for (int k : family.members) out[std::size_t(k - 1)] = 1;
    return digit_sequence(std::move(out));
}

} // namespace cbx
