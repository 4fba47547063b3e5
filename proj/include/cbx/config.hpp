#pragma once

#include <cstdint>
#include <string>

namespace cbx {

enum class precision_mode { standard, extended };
enum class output_format { json, csv, text };

// Run-wide knobs. Defaults are safe for every test in the suite; the CLI can
// override them from flags, a JSON config file, or the CBX_PRECISION env var.
struct run_config {
    precision_mode precision = precision_mode::standard;
    double dedup_tolerance = 1e-12; // relative, applied as tol*max(1,|value|)
    int max_depth = 64;             // digit-tree search depth cap
    int n_cap_extra = 400;          // extra n retries per stage beyond the analytic start
    std::uint64_t backtrack_budget = 1'000'000;
    std::uint64_t spectrum_point_cap = std::uint64_t(1) << 24;
    output_format format = output_format::json;
    std::uint64_t seed = 0;
};

} // namespace cbx
