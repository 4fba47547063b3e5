#pragma once

#include "cbx/bases.hpp"
#include "cbx/universal.hpp"

#include <string>
#include <vector>

namespace cbx {

// Machine-checkable certificate of a universal-prefix construction. All
// numbers are serialized as decimal strings at full precision so files round
// trip exactly.
struct certificate {
    int schema = 1;
    std::string mode;                  // "direct" or "even"
    std::string base_spec;
    int frame_m = 1;                   // frame size the stages ran in (m, or m' for even)
    int m_prime = 0;                   // even mode only
    int level = 0;                     // claimed universal block level (0 = unclaimed)
    int num_blocks = 0;
    std::vector<std::string> alpha;    // stage-entry coordinates, each in (0,1)
    std::vector<std::string> alpha_input; // even mode: original frame coordinates
    std::string digits;                // output word d
    std::string inner_digits;          // even mode: d' with d = T(d', m')
    struct checkpoint {
        std::int64_t i = 0; // cumulative digit count / frame_m
        std::int64_t n = 0, N = 0;
        std::string block;     // confirmed block (pre-padding)
        std::vector<std::string> residuals; // rescaled, each in (0,1)
    };
    std::vector<checkpoint> checkpoints;

    std::string to_json() const;
    static certificate from_json(const std::string& text);
    void save(const std::string& path) const;
    static certificate load(const std::string& path);
};

certificate make_certificate(const alpha_vector& alpha, const universal_result& result,
                             int num_blocks, int level);
certificate make_certificate(const base_q& base, const universal_even_result& result,
                             int num_blocks, int level);

// Independent re-validation: recomputes every stage sum with compensated
// long-double summation, re-checks both strict residual inequalities, the
// suffix blocks, the recorded residual chain, the transform relation (even
// mode) and the claimed universality level.
struct verify_report {
    bool ok = false;
    std::vector<std::string> lines;
    double min_lower_margin = 0.0; // min over stages/coordinates of alpha - S
    double min_upper_margin = 0.0; // min of x^-(n+N) - (alpha - S)
    double oracle_error_bound = 0.0;
};
verify_report verify_certificate(const certificate& cert);

} // namespace cbx
