#pragma once

#include "cbx/bases.hpp"
#include "cbx/config.hpp"
#include "cbx/digits.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cbx {

// Real coordinates of a point in the frame {(p omega)^{m-j}}, j = 1..m.
struct alpha_vector {
    base_q base;
    std::vector<double> alphas;

    int m() const { return int(alphas.size()); }
    std::complex<double> reconstruct() const;
};

// State after one block-stitching stage: the prefix up to digit m*index_ik
// ends with the confirmed block and the telescoped residual
// alpha_j - partial_sum_j lies in (0, p^-(m*index_ik)), equivalently the
// rescaled residual recorded here lies in (0,1).
struct construction_checkpoint {
    std::int64_t index_ik = 0;
    std::vector<double> scaled_residuals;
    block block_confirmed;
    std::int64_t stage_n = 0, stage_N = 0;
};

// Result of one suffix-extension step: digits of length
// m*(n+N) ending with the requested block, with per-coordinate residuals
// alpha_j - sum_i d_{mi+j} x^-(i+1) in the open interval (0, x^-(n+N)).
struct stage_result {
    digit_word digits;
    std::int64_t n = 0, N = 0;
    std::vector<double> next_alphas;   // rescaled residuals, each in (0,1)
    std::vector<double> targets;       // t_j = x^n alpha_j - A_j
    std::vector<double> chosen_values; // spectrum points y_j < t_j
};

// Core extension step in the frame (m, p), x = p^m. Requires 0 < alpha_j <= 1,
// suffix length a multiple of m, and 1 < p < 2^(1/4m).
stage_result extend_with_suffix(const std::vector<double>& alphas, int m, double p,
                                const digit_word& suffix, const run_config& cfg = {});

// Convenience wrapper matching the alpha_vector carrier.
stage_result extend_with_suffix(const alpha_vector& alpha, const block& suffix,
                                const run_config& cfg = {});

struct universal_result {
    digit_word prefix;
    std::vector<construction_checkpoint> checkpoints;
    std::vector<std::string> warnings;
};

// Stitches the first num_blocks blocks of the canonical enumeration into one
// prefix by repeated suffix extension on the rescaled residuals. With
// num_blocks = 2^(L+1)-2 the prefix contains every block of length <= L.
universal_result universal_expansion(const alpha_vector& alpha, int num_blocks,
                                     const run_config& cfg = {});

// Even-order path: translate z into the m'-frame, build a universal d' for
// the translate with carrier blocks, and return d = T(d') which expands z in
// base p*omega through the alternating-sign identity.
struct universal_even_result {
    digit_word digits;  // d = T(d', m')
    digit_word inner;   // d'
    std::vector<construction_checkpoint> checkpoints;
    std::vector<double> alpha;            // coordinates of z in the m'-frame
    std::vector<double> alpha_translated; // alpha + p^m'/(p^2m'-1), each in (0,1)
    int m_prime = 1;
    std::vector<std::string> warnings;
};

universal_even_result universal_even(std::complex<double> z, const base_q& base, int num_blocks,
                                     const run_config& cfg = {});
universal_even_result universal_even_alpha(const std::vector<double>& alphas, const base_q& base,
                                           int num_blocks, const run_config& cfg = {});

// Open admissible range for the even path's frame coordinates.
struct alpha_range {
    double lo, hi; // (-p^m'/(p^2m'-1), (p^2m'-p^m'-1)/(p^2m'-1)), width exactly 1
};
alpha_range universal_even_range(double p, int m_prime);

// Writes an interior point of (p^m-1) J_q as sum_j (p omega)^{m-j} alpha_j
// with all alpha_j strictly inside (0,1). Requires order m >= 3, p^m <= 2.
alpha_vector decompose_alpha(std::complex<double> z, const base_q& base);

} // namespace cbx
