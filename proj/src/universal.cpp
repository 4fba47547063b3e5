#include "cbx/universal.hpp"
#include "cbx/errors.hpp"
#include "cbx/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cbx {

namespace {

// Compensated long-double summation of sum_i d_{m i + j} x^-(i+1) for one
// coordinate; the construction-side cross-check of every stage.
long double coordinate_sum(const digit_word& d, int m, int j, long double x) {
    long double sum = 0.0L, comp = 0.0L;
    const std::size_t rows = d.size() / std::size_t(m);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!d[i * std::size_t(m) + std::size_t(j - 1)]) continue;
        const long double term = std::pow(x, -(long double)(i + 1));
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void check_stage_regime(int m, double p) {
    if (m < 1) fail(errc::invalid_argument, "extend_with_suffix: m must be >= 1");
    if (!(p > 1.0)) fail(errc::invalid_argument, "extend_with_suffix: p must be > 1");
    if (!(std::pow(p, 4.0 * m) < 2.0))
        fail(errc::precondition, "extend_with_suffix: requires 1 < p < 2^(1/4m)");
}

} // namespace

std::complex<double> alpha_vector::reconstruct() const {
    std::complex<double> z = 0.0;
    const int mm = m();
    for (int j = 1; j <= mm; ++j) z += base.q_pow(mm - j) * alphas[std::size_t(j - 1)];
    return z;
}

stage_result extend_with_suffix(const std::vector<double>& alphas, int m, double p,
                                const digit_word& suffix, const run_config& cfg) {
    check_stage_regime(m, p);
    if (int(alphas.size()) != m) fail(errc::invalid_argument, "extend_with_suffix: |alpha| != m");
    if (suffix.size() % std::size_t(m) != 0)
        fail(errc::invalid_argument, "extend_with_suffix: suffix length not a multiple of m");
    for (double a : alphas)
        if (!(a > 0.0) || a > 1.0)
            fail(errc::precondition, "extend_with_suffix: alpha_j must lie in (0, 1]");

    const double x = std::pow(p, m);
    const std::int64_t N = std::int64_t(suffix.size()) / m;
    const double eps = std::pow(x, -double(N));
    const bool extended = cfg.precision == precision_mode::extended;

    // A_j in working precision; extended mode carries the block sums and
    // targets in long double (useful when p is very close to 1).
    std::vector<double> A(std::size_t(m), 0.0);
    for (int j = 1; j <= m; ++j) {
        long double acc = 0.0L;
        for (std::int64_t i = 0; i < N; ++i)
            if (suffix[std::size_t(i * m + j - 1)])
                acc += extended ? std::pow((long double)x, -(long double)(i + 1))
                                : (long double)std::pow(x, -double(i + 1));
        A[std::size_t(j - 1)] = double(acc);
    }

    // Analytic start: smallest n with x^n alpha_j clear of A_j + eps.
    std::int64_t n0 = 0;
    for (int j = 0; j < m; ++j) {
        const double need = (A[std::size_t(j)] + eps) / alphas[std::size_t(j)];
        if (need > 1.0) n0 = std::max<std::int64_t>(n0, std::int64_t(std::log(need) / std::log(x)) + 1);
    }
    const std::int64_t n_cap = n0 + std::max<std::int64_t>(1, cfg.n_cap_extra / m);

    for (std::int64_t n = n0; n <= n_cap; ++n) {
        const long double xn_ld = std::pow((long double)x, (long double)n);
        const double xn = double(xn_ld);
        std::vector<double> targets(std::size_t(m), 0.0), chosen(std::size_t(m), 0.0);
        std::vector<std::vector<std::uint8_t>> coeffs;
        coeffs.resize(std::size_t(m));
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            const double t = extended ? double(xn_ld * (long double)alphas[std::size_t(j)] -
                                               (long double)A[std::size_t(j)])
                                      : xn * alphas[std::size_t(j)] - A[std::size_t(j)];
            // Margins keep both residual inequalities strict with slack far above
            // round-off; the search prefers the window center.
            const double mu = std::max(1e-6 * eps,
                                       1e3 * std::numeric_limits<double>::epsilon() *
                                           std::max(1.0, std::abs(t)));
            if (!(t > 2.0 * mu)) { ok = false; break; }
            auto pt = find_in_window(x, t - eps + mu, t - mu, t - eps / 2.0, int(n) - 1,
                                     cfg.backtrack_budget);
            if (!pt) { ok = false; break; }
            targets[std::size_t(j)] = t;
            chosen[std::size_t(j)] = pt->value;
            coeffs[std::size_t(j)] = std::move(pt->coeffs);
        }
        if (!ok) continue;

        stage_result res;
        res.n = n;
        res.N = N;
        res.digits.assign(std::size_t(m) * std::size_t(n + N), 0);
        for (int j = 1; j <= m; ++j) {
            const auto& cv = coeffs[std::size_t(j - 1)];
            for (std::int64_t i = 0; i < n; ++i) {
                const std::size_t deg = std::size_t(n - 1 - i);
                if (deg < cv.size() && cv[deg]) res.digits[std::size_t(i * m + j - 1)] = 1;
            }
            for (std::int64_t i = 0; i < N; ++i)
                res.digits[std::size_t((n + i) * m + j - 1)] = suffix[std::size_t(i * m + j - 1)];
        }
        res.targets = targets;
        res.chosen_values = chosen;
        res.next_alphas.resize(std::size_t(m));
        const double xN = std::pow(x, double(N));
        bool verified = true;
        for (int j = 1; j <= m; ++j) {
            res.next_alphas[std::size_t(j - 1)] =
                xN * (targets[std::size_t(j - 1)] - chosen[std::size_t(j - 1)]);
            // Cross-check the residual inequalities by independent compensated summation.
            const long double S = coordinate_sum(res.digits, m, j, x);
            const long double resid = (long double)alphas[std::size_t(j - 1)] - S;
            const long double hi = std::pow((long double)x, -(long double)(n + N));
            if (!(resid > 0.0L) || !(resid < hi)) verified = false;
        }
        if (!verified)
            fail(errc::construction_failed,
                 "extend_with_suffix: residual bounds failed under re-summation (precision)");
        return res;
    }
    fail(errc::budget_exhausted,
         "extend_with_suffix: no spectrum point found in the residual window up to n = " +
             std::to_string(n_cap) + " (p may be too close to the Pisot obstruction)");
}

stage_result extend_with_suffix(const alpha_vector& alpha, const block& suffix,
                                const run_config& cfg) {
    const auto order = alpha.base.order();
    if (!order) fail(errc::unsupported_family, "extend_with_suffix: base needs a finite order");
    digit_word padded = suffix.digits;
    if (padded.size() % std::size_t(*order) != 0)
        padded.resize(padded.size() + (std::size_t(*order) - padded.size() % std::size_t(*order)), 0);
    return extend_with_suffix(alpha.alphas, *order, alpha.base.p(), padded, cfg);
}

namespace {

universal_result stitch_blocks(std::vector<double> alphas, int m, double p,
                               const std::vector<digit_word>& suffixes,
                               const std::vector<block>& confirmed, const run_config& cfg) {
    universal_result out;
    std::int64_t ik = 0;
    for (std::size_t k = 0; k < suffixes.size(); ++k) {
        stage_result st = extend_with_suffix(alphas, m, p, suffixes[k], cfg);
        out.prefix.insert(out.prefix.end(), st.digits.begin(), st.digits.end());
        ik += st.n + st.N;
        out.checkpoints.push_back({ik, st.next_alphas, confirmed[k], st.n, st.N});
        alphas = st.next_alphas;
        for (double a : alphas)
            if (!(a > 0.0) || !(a < 1.0))
                fail(errc::construction_failed, "universal: rescaled residual left (0,1)");
    }
    return out;
}

} // namespace

universal_result universal_expansion(const alpha_vector& alpha, int num_blocks,
                                     const run_config& cfg) {
    if (num_blocks < 1) fail(errc::invalid_argument, "universal_expansion: num_blocks >= 1");
    const auto order = alpha.base.order();
    if (!order) fail(errc::unsupported_family, "universal_expansion: base needs a finite order");
    const int m = *order;
    const double p = alpha.base.p();
    check_stage_regime(m, p);
    for (double a : alpha.alphas)
        if (!(a > 0.0) || !(a < 1.0))
            fail(errc::precondition, "universal_expansion: alpha_j must lie in (0,1)");

    std::vector<std::string> warnings;
    if (std::abs(std::pow(p, 2.0 * m) - second_pisot()) < 1e-6)
        warnings.push_back("p^(2m) is within 1e-6 of the second Pisot number; gaps may stall");

    std::vector<block> blocks = enumerate_blocks(std::uint64_t(num_blocks));
    std::vector<digit_word> suffixes;
    suffixes.reserve(blocks.size());
    for (const auto& b : blocks) {
        digit_word w = b.digits;
        if (w.size() % std::size_t(m) != 0)
            w.resize(w.size() + (std::size_t(m) - w.size() % std::size_t(m)), 0);
        suffixes.push_back(std::move(w));
    }
    universal_result res = stitch_blocks(alpha.alphas, m, p, suffixes, blocks, cfg);
    res.warnings = std::move(warnings);
    return res;
}

alpha_range universal_even_range(double p, int m_prime) {
    const double pm = std::pow(p, m_prime);
    const double den = pm * pm - 1.0;
    return {-pm / den, (pm * pm - pm - 1.0) / den};
}

universal_even_result universal_even_alpha(const std::vector<double>& alphas, const base_q& base,
                                           int num_blocks, const run_config& cfg) {
    if (num_blocks < 1) fail(errc::invalid_argument, "universal_even: num_blocks >= 1");
    const auto order = base.order();
    if (!order || *order % 2 != 0)
        fail(errc::precondition, "universal_even: base must have even finite order");
    const int m_prime = *order / 2;
    if (int(alphas.size()) != m_prime)
        fail(errc::invalid_argument, "universal_even: |alpha| != m/2");
    const double p = base.p();
    if (!(std::pow(p, 2.0 * *order) < 2.0))
        fail(errc::precondition, "universal_even: requires 1 < p < 2^(1/2m)");

    const alpha_range range = universal_even_range(p, m_prime);
    for (double a : alphas)
        if (!(a > range.lo) || !(a < range.hi))
            fail(errc::precondition, "universal_even: alpha_j outside the open admissible range");

    std::vector<std::string> warnings;
    if (std::abs(std::pow(p, double(*order)) - second_pisot()) < 1e-6)
        warnings.push_back("p^m is within 1e-6 of the second Pisot number; gaps may stall");

    const double pm = std::pow(p, m_prime);
    const double shift = pm / (pm * pm - 1.0);
    std::vector<double> translated(alphas.size());
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        translated[j] = alphas[j] + shift;
        if (!(translated[j] > 0.0) || !(translated[j] < 1.0))
            fail(errc::precondition, "universal_even: translated alpha left (0,1)");
    }

    // Carrier blocks: wherever padded_block(B, m') lands in d', the transform
    // recovers B inside d, so d is universal to the same level as the list.
    std::vector<block> confirmed = enumerate_blocks(std::uint64_t(num_blocks));
    std::vector<digit_word> suffixes;
    suffixes.reserve(confirmed.size());
    for (const auto& b : confirmed) {
        digit_word w = padded_block(b, m_prime).digits;
        if (w.size() % std::size_t(m_prime) != 0)
            w.resize(w.size() + (std::size_t(m_prime) - w.size() % std::size_t(m_prime)), 0);
        suffixes.push_back(std::move(w));
    }

    universal_result inner = stitch_blocks(translated, m_prime, p, suffixes, confirmed, cfg);

    universal_even_result out;
    out.inner = inner.prefix;
    out.digits = transform_word(inner.prefix, m_prime);
    out.checkpoints = std::move(inner.checkpoints);
    out.alpha = alphas;
    out.alpha_translated = std::move(translated);
    out.m_prime = m_prime;
    out.warnings = std::move(warnings);
    return out;
}

universal_even_result universal_even(std::complex<double> z, const base_q& base, int num_blocks,
                                     const run_config& cfg) {
    const auto order = base.order();
    if (!order || *order % 2 != 0)
        fail(errc::precondition, "universal_even: base must have even finite order");
    const int m_prime = *order / 2;
    std::vector<double> alphas;
    if (m_prime == 1) {
        if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z)))
            fail(errc::invalid_argument, "universal_even: z must be real when m' = 1");
        alphas = {z.real()};
    } else if (m_prime == 2) {
        const std::complex<double> v1 = base.q_pow(1); // (p omega)^1
        if (std::abs(v1.imag()) < 1e-15)
            fail(errc::precondition, "universal_even: degenerate frame");
        const double a1 = z.imag() / v1.imag();
        const double a2 = z.real() - a1 * v1.real();
        alphas = {a1, a2};
    } else {
        fail(errc::invalid_argument,
             "universal_even: pass frame coordinates directly for m' >= 3");
    }
    return universal_even_alpha(alphas, base, num_blocks, cfg);
}

alpha_vector decompose_alpha(std::complex<double> z, const base_q& base) {
    const auto order = base.order();
    if (!order || *order < 3)
        fail(errc::precondition, "decompose_alpha: base must be a root of unity of order >= 3");
    const int m = *order;
    const double p = base.p();
    const double pm = std::pow(p, m);
    if (!(pm > 1.0) || pm > 2.0)
        fail(errc::precondition, "decompose_alpha: requires 1 < p^m <= 2");

    // Frame as a 2 x m real system.
    std::vector<double> re(std::size_t(m), 0.0), im(std::size_t(m), 0.0);
    for (int j = 1; j <= m; ++j) {
        const auto v = base.q_pow(m - j);
        re[std::size_t(j - 1)] = v.real();
        im[std::size_t(j - 1)] = v.imag();
    }
    const double g11 = std::inner_product(re.begin(), re.end(), re.begin(), 0.0);
    const double g12 = std::inner_product(re.begin(), re.end(), im.begin(), 0.0);
    const double g22 = std::inner_product(im.begin(), im.end(), im.begin(), 0.0);
    const double det = g11 * g22 - g12 * g12;
    if (std::abs(det) < 1e-12)
        fail(errc::precondition, "decompose_alpha: frame rows are numerically dependent");

    auto affine_project = [&](std::vector<double>& a, std::complex<double> target) {
        double r1 = target.real(), r2 = target.imag();
        for (int j = 0; j < m; ++j) {
            r1 -= re[std::size_t(j)] * a[std::size_t(j)];
            r2 -= im[std::size_t(j)] * a[std::size_t(j)];
        }
        const double l1 = (g22 * r1 - g12 * r2) / det;
        const double l2 = (g11 * r2 - g12 * r1) / det;
        for (int j = 0; j < m; ++j)
            a[std::size_t(j)] += re[std::size_t(j)] * l1 + im[std::size_t(j)] * l2;
    };

    // Box-constrained feasibility for target: min-norm point from the box
    // center, then alternating projections onto box and plane.
    auto solve_in_box = [&](std::complex<double> target, std::vector<double>& a) -> bool {
        a.assign(std::size_t(m), 0.5);
        affine_project(a, target);
        for (int iter = 0; iter < 20000; ++iter) {
            bool inside = true;
            for (double& v : a) {
                if (v < 0.0) { v = 0.0; inside = false; }
                if (v > 1.0) { v = 1.0; inside = false; }
            }
            affine_project(a, target);
            if (inside && iter > 0) break;
        }
        for (double v : a)
            if (v < -1e-9 || v > 1.0 + 1e-9) return false;
        std::complex<double> back = 0.0;
        for (int j = 0; j < m; ++j)
            back += std::complex<double>(re[std::size_t(j)], im[std::size_t(j)]) * a[std::size_t(j)];
        return std::abs(back - target) <= 1e-10 * std::max(1.0, std::abs(target));
    };

    // Kernel direction delta_j = p^(j-m): sum_j (p w)^(m-j) delta_j = 0, so
    // shifting along it fixes near-zero coordinates without moving the point.
    std::vector<double> delta(std::size_t(m), 0.0);
    for (int j = 1; j <= m; ++j) delta[std::size_t(j - 1)] = std::pow(p, double(j - m));

    // Direct solve first; contraction (represent t*z, divide by t) only when
    // the direct solution is not strictly interior.
    auto attempt = [&](double t) -> std::vector<double> {
        std::vector<double> a;
        if (!solve_in_box(t * z, a)) return {};
        for (double& v : a) v /= t;
        double s = 0.0;
        for (int j = 0; j < m; ++j)
            if (a[std::size_t(j)] < 1e-6)
                s = std::max(s, (1e-6 - a[std::size_t(j)]) / delta[std::size_t(j)]);
        for (int j = 0; j < m; ++j)
            if (a[std::size_t(j)] + s * delta[std::size_t(j)] > 1.0 - 1e-6) return {};
        for (int j = 0; j < m; ++j) a[std::size_t(j)] += s * delta[std::size_t(j)];
        affine_project(a, z);
        if (std::abs([&] {
                std::complex<double> back = 0.0;
                for (int j = 0; j < m; ++j)
                    back += std::complex<double>(re[std::size_t(j)], im[std::size_t(j)]) *
                            a[std::size_t(j)];
                return back - z;
            }()) > 1e-12 * std::max(1.0, std::abs(z)))
            return {};
        for (double v : a)
            if (!(v > 0.0) || !(v < 1.0)) return {};
        return a;
    };

    std::vector<double> a = attempt(1.0);
    double t = 1.0 + 1e-3;
    for (int tries = 0; tries < 10 && a.empty(); ++tries) {
        a = attempt(t);
        t = 1.0 + (t - 1.0) / 2.0;
    }
    if (a.empty())
        fail(errc::out_of_range,
             "decompose_alpha: z is not interior to (p^m - 1) J_q (box feasibility failed)");
    return alpha_vector{base, std::move(a)};
}

} // namespace cbx
