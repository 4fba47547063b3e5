#include "cbx/certificate.hpp"
#include "cbx/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace cbx {

namespace {

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string word_str(const digit_word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto d : w) s.push_back(char('0' + d));
    return s;
}

digit_word word_parse(const std::string& s) {
    digit_word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') fail(errc::invalid_argument, "certificate: bad digit string");
        w.push_back(std::uint8_t(c - '0'));
    }
    return w;
}

long double parse_ld(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    long double v = strtold(begin, &end);
    if (end != begin + s.size()) fail(errc::invalid_argument, "certificate: bad number " + s);
    return v;
}

} // namespace

std::string certificate::to_json() const {
    nlohmann::json j;
    j["schema"] = schema;
    j["kind"] = "universal-certificate";
    j["mode"] = mode;
    j["base"] = base_spec;
    j["frame_m"] = frame_m;
    if (mode == "even") {
        j["m_prime"] = m_prime;
        j["inner_digits"] = inner_digits;
        j["alpha_input"] = alpha_input;
    }
    j["level"] = level;
    j["num_blocks"] = num_blocks;
    j["alpha"] = alpha;
    j["digits"] = digits;
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& c : checkpoints) {
        nlohmann::json jc;
        jc["i"] = c.i;
        jc["n"] = c.n;
        jc["N"] = c.N;
        jc["block"] = c.block;
        jc["residuals"] = c.residuals;
        cps.push_back(std::move(jc));
    }
    j["checkpoints"] = std::move(cps);
    return j.dump(2);
}

certificate certificate::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::invalid_argument, std::string("certificate: JSON parse error: ") + e.what());
    }
    certificate c;
    try {
        c.schema = j.at("schema").get<int>();
        if (c.schema != 1) fail(errc::invalid_argument, "certificate: unsupported schema");
        c.mode = j.at("mode").get<std::string>();
        c.base_spec = j.at("base").get<std::string>();
        c.frame_m = j.at("frame_m").get<int>();
        c.level = j.at("level").get<int>();
        c.num_blocks = j.at("num_blocks").get<int>();
        c.alpha = j.at("alpha").get<std::vector<std::string>>();
        c.digits = j.at("digits").get<std::string>();
        if (c.mode == "even") {
            c.m_prime = j.at("m_prime").get<int>();
            c.inner_digits = j.at("inner_digits").get<std::string>();
            c.alpha_input = j.at("alpha_input").get<std::vector<std::string>>();
        }
        for (const auto& jc : j.at("checkpoints")) {
            certificate::checkpoint cp;
            cp.i = jc.at("i").get<std::int64_t>();
            cp.n = jc.at("n").get<std::int64_t>();
            cp.N = jc.at("N").get<std::int64_t>();
            cp.block = jc.at("block").get<std::string>();
            cp.residuals = jc.at("residuals").get<std::vector<std::string>>();
            c.checkpoints.push_back(std::move(cp));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(errc::invalid_argument, std::string("certificate: missing field: ") + e.what());
    }
    return c;
}

void certificate::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail(errc::invalid_argument, "certificate: cannot write " + path);
    out << to_json() << "\n";
}

certificate certificate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "certificate: cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

certificate make_certificate(const alpha_vector& alpha, const universal_result& result,
                             int num_blocks, int level) {
    certificate c;
    c.mode = "direct";
    c.base_spec = alpha.base.str();
    c.frame_m = alpha.m();
    c.level = level;
    c.num_blocks = num_blocks;
    for (double a : alpha.alphas) c.alpha.push_back(num_str(a));
    c.digits = word_str(result.prefix);
    for (const auto& cp : result.checkpoints) {
        certificate::checkpoint out;
        out.i = cp.index_ik;
        out.n = cp.stage_n;
        out.N = cp.stage_N;
        out.block = cp.block_confirmed.str();
        for (double r : cp.scaled_residuals) out.residuals.push_back(num_str(r));
        c.checkpoints.push_back(std::move(out));
    }
    return c;
}

certificate make_certificate(const base_q& base, const universal_even_result& result,
                             int num_blocks, int level) {
    certificate c;
    c.mode = "even";
    c.base_spec = base.str();
    c.frame_m = result.m_prime;
    c.m_prime = result.m_prime;
    c.level = level;
    c.num_blocks = num_blocks;
    for (double a : result.alpha_translated) c.alpha.push_back(num_str(a));
    for (double a : result.alpha) c.alpha_input.push_back(num_str(a));
    c.digits = word_str(result.digits);
    c.inner_digits = word_str(result.inner);
    for (const auto& cp : result.checkpoints) {
        certificate::checkpoint out;
        out.i = cp.index_ik;
        out.n = cp.stage_n;
        out.N = cp.stage_N;
        out.block = cp.block_confirmed.str();
        for (double r : cp.scaled_residuals) out.residuals.push_back(num_str(r));
        c.checkpoints.push_back(std::move(out));
    }
    return c;
}

verify_report verify_certificate(const certificate& cert) {
    verify_report rep;
    auto reject = [&](const std::string& why) {
        rep.lines.push_back("REJECT: " + why);
        rep.ok = false;
        return rep;
    };

    if (cert.mode != "direct" && cert.mode != "even") return reject("unknown mode " + cert.mode);
    base_q base = base_q::parse(cert.base_spec);
    const int m = cert.frame_m;
    if (m < 1) return reject("bad frame size");
    const long double x = std::pow((long double)base.p(), (long double)m);

    const digit_word digits = word_parse(cert.digits);
    digit_word working = digits;
    if (cert.mode == "even") {
        if (cert.m_prime != m) return reject("frame/m_prime mismatch");
        working = word_parse(cert.inner_digits);
        if (transform_word(working, cert.m_prime) != digits)
            return reject("digits != transform(inner_digits)");
    }
    if (working.size() % std::size_t(m) != 0) return reject("digit count not a multiple of m");

    if (int(cert.alpha.size()) != m) return reject("alpha arity mismatch");
    std::vector<long double> alpha(cert.alpha.size());
    for (std::size_t j = 0; j < cert.alpha.size(); ++j) {
        alpha[j] = parse_ld(cert.alpha[j]);
        if (!(alpha[j] > 0.0L) || !(alpha[j] < 1.0L)) return reject("alpha not in (0,1)");
    }

    long double min_lo = std::numeric_limits<long double>::infinity();
    long double min_hi = std::numeric_limits<long double>::infinity();
    long double err_bound = 0.0L;
    std::size_t pos = 0; // digit cursor
    std::int64_t expect_i = 0;

    for (std::size_t k = 0; k < cert.checkpoints.size(); ++k) {
        const auto& cp = cert.checkpoints[k];
        const std::int64_t rows = cp.n + cp.N;
        expect_i += rows;
        if (cp.i != expect_i) return reject("checkpoint index chain broken at stage " +
                                            std::to_string(k + 1));
        const std::size_t len = std::size_t(rows) * std::size_t(m);
        if (pos + len > working.size()) return reject("digit word shorter than checkpoints claim");

        // Suffix must equal the recorded block, padded the way the stage ran.
        digit_word suffix = word_parse(cp.block);
        if (cert.mode == "even") suffix = padded_block(block{suffix}, cert.m_prime).digits;
        if (suffix.size() % std::size_t(m) != 0)
            suffix.resize(suffix.size() + (std::size_t(m) - suffix.size() % std::size_t(m)), 0);
        if (std::size_t(cp.N) * std::size_t(m) != suffix.size())
            return reject("stage N inconsistent with block at stage " + std::to_string(k + 1));
        for (std::size_t t = 0; t < suffix.size(); ++t)
            if (working[pos + len - suffix.size() + t] != suffix[t])
                return reject("stage does not end with its block at stage " + std::to_string(k + 1));

        if (int(cp.residuals.size()) != m) return reject("residual arity mismatch");
        const long double hi = std::pow(x, -(long double)rows);
        std::vector<long double> next(std::size_t(m), 0.0L);
        for (int j = 1; j <= m; ++j) {
            long double sum = 0.0L, comp = 0.0L;
            long double terms = 0.0L;
            for (std::int64_t i = 0; i < rows; ++i) {
                if (!working[pos + std::size_t(i) * std::size_t(m) + std::size_t(j - 1)]) continue;
                const long double term = std::pow(x, -(long double)(i + 1));
                terms += term;
                const long double y = term - comp;
                const long double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            const long double resid = alpha[std::size_t(j - 1)] - sum;
            err_bound = std::max(err_bound,
                                 (long double)rows * std::numeric_limits<long double>::epsilon() *
                                     std::max(1.0L, terms));
            if (!(resid > 0.0L))
                return reject("lower residual inequality fails at stage " + std::to_string(k + 1) +
                              " coordinate " + std::to_string(j));
            if (!(resid < hi))
                return reject("upper residual inequality fails at stage " + std::to_string(k + 1) +
                              " coordinate " + std::to_string(j));
            min_lo = std::min(min_lo, resid);
            min_hi = std::min(min_hi, hi - resid);
            next[std::size_t(j - 1)] = resid / hi; // x^(n+N) * resid
            const long double recorded = parse_ld(cp.residuals[std::size_t(j - 1)]);
            // Stage-local chain check against the recorded value. The next
            // stage is verified against the recorded entry, so float
            // divergence cannot compound across stages.
            if (std::abs(next[std::size_t(j - 1)] - recorded) >
                1e-9L * std::max(1.0L, std::abs(recorded)))
                return reject("recorded residual disagrees with recomputation at stage " +
                              std::to_string(k + 1));
            if (!(recorded > 0.0L) || !(recorded < 1.0L))
                return reject("rescaled residual left (0,1) at stage " + std::to_string(k + 1));
            next[std::size_t(j - 1)] = recorded;
        }
        alpha = next;
        pos += len;
        rep.lines.push_back("stage " + std::to_string(k + 1) + " ok (i_k = " +
                            std::to_string(cp.i) + ", block " + cp.block + ")");
    }
    if (pos != working.size()) return reject("trailing digits beyond the last checkpoint");

    if (cert.level > 0 && !is_universal_prefix(digits, cert.level))
        return reject("prefix is not universal to the claimed level");

    rep.ok = true;
    rep.min_lower_margin = double(min_lo);
    rep.min_upper_margin = double(min_hi);
    rep.oracle_error_bound = double(err_bound);
    rep.lines.push_back("all inequalities strict; min margins " + num_str(double(min_lo)) + " / " +
                        num_str(double(min_hi)));
    return rep;
}

} // namespace cbx
