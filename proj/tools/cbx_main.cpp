#include "cbx/bases.hpp"
#include "cbx/certificate.hpp"
#include "cbx/config.hpp"
#include "cbx/digits.hpp"
#include "cbx/errors.hpp"
#include "cbx/expansions.hpp"
#include "cbx/spectrum.hpp"
#include "cbx/universal.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cpx(std::complex<double> z) {
    std::string s = num(z.real());
    if (z.imag() >= 0 || std::isnan(z.imag())) s += "+";
    s += num(z.imag()) + "i";
    return s;
}

// "a+bi" with optional signs and either part missing; "0.2i", "-1.5", "i".
std::complex<double> parse_complex(const std::string& text) {
    if (text.empty()) cbx::fail(cbx::errc::invalid_argument, "empty complex literal");
    const bool has_i = text.back() == 'i';
    std::string body = has_i ? text.substr(0, text.size() - 1) : text;
    if (!has_i) {
        std::size_t pos = 0;
        double re = 0;
        try {
            re = std::stod(body, &pos);
        } catch (const std::exception&) {
            cbx::fail(cbx::errc::invalid_argument, "bad complex literal: " + text);
        }
        if (pos != body.size()) cbx::fail(cbx::errc::invalid_argument, "bad complex literal: " + text);
        return {re, 0.0};
    }
    // imaginary part is the trailing signed number; find its leading sign
    std::size_t split = body.find_last_of("+-");
    while (split != std::string::npos && split > 0 &&
           (body[split - 1] == 'e' || body[split - 1] == 'E'))
        split = body.find_last_of("+-", split - 1);
    double re = 0.0;
    std::string im_part;
    if (split == std::string::npos || split == 0) {
        im_part = body;
    } else {
        re = std::stod(body.substr(0, split));
        im_part = body.substr(split);
    }
    double im;
    if (im_part.empty() || im_part == "+") im = 1.0;
    else if (im_part == "-") im = -1.0;
    else im = std::stod(im_part);
    return {re, im};
}

int code_for(cbx::errc c) {
    switch (c) {
        case cbx::errc::invalid_argument:
        case cbx::errc::unsupported_family: return 1;
        case cbx::errc::out_of_range:
        case cbx::errc::precondition: return 2;
        case cbx::errc::budget_exhausted:
        case cbx::errc::construction_failed: return 3;
    }
    return 1;
}

struct cli_options {
    cbx::run_config cfg;
    std::string format = "json";
};

void load_config_file(cbx::run_config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) cbx::fail(cbx::errc::invalid_argument, "cannot read config " + path);
    json j = json::parse(in, nullptr, true);
    if (j.contains("precision"))
        cfg.precision = j["precision"] == "extended" ? cbx::precision_mode::extended
                                                     : cbx::precision_mode::standard;
    if (j.contains("dedup_tolerance")) cfg.dedup_tolerance = j["dedup_tolerance"].get<double>();
    if (j.contains("max_depth")) cfg.max_depth = j["max_depth"].get<int>();
    if (j.contains("n_cap_extra")) cfg.n_cap_extra = j["n_cap_extra"].get<int>();
    if (j.contains("backtrack_budget"))
        cfg.backtrack_budget = j["backtrack_budget"].get<std::uint64_t>();
    if (j.contains("spectrum_point_cap"))
        cfg.spectrum_point_cap = j["spectrum_point_cap"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("format")) {
        const std::string f = j["format"].get<std::string>();
        cfg.format = f == "csv" ? cbx::output_format::csv
                   : f == "text" ? cbx::output_format::text : cbx::output_format::json;
    }
}

void emit(const json& j, const std::string& format, const std::string& text_field) {
    if (format == "text") {
        if (j.contains(text_field)) std::cout << j[text_field].get<std::string>() << "\n";
        else std::cout << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"{0,1} digit expansions in real, negative, imaginary and complex bases"};
    app.require_subcommand(1);

    cli_options opt;
    std::string config_path;
    if (const char* env = std::getenv("CBX_PRECISION"))
        opt.cfg.precision = std::string(env) == "extended" ? cbx::precision_mode::extended
                                                           : cbx::precision_mode::standard;
    std::string precision_flag;
    app.add_option("--config", config_path, "JSON run-config file");
    app.add_option("--format", opt.format, "json | csv | text");
    app.add_option("--precision", precision_flag, "standard | extended");
    app.add_option("--seed", opt.cfg.seed, "random seed (reproducibility)");
    app.add_option("--budget", opt.cfg.backtrack_budget, "backtracking node budget");
    app.add_option("--point-cap", opt.cfg.spectrum_point_cap, "spectrum enumeration cap");
    app.add_option("--n-cap", opt.cfg.n_cap_extra, "extra n retries per extension stage");

    // expand
    auto* c_expand = app.add_subcommand("expand", "expand a target in a base");
    c_expand->fallthrough();
    std::string e_base, e_x, e_z;
    int e_digits = 60;
    c_expand->add_option("--base", e_base, "base spec: p | -p | p*i | p@a/b | p@rad:t")->required();
    c_expand->add_option("--x", e_x, "real target");
    c_expand->add_option("--z", e_z, "complex target a+bi");
    c_expand->add_option("--digits", e_digits, "digit count K");

    // count
    auto* c_count = app.add_subcommand("count", "count feasible expansion prefixes");
    c_count->fallthrough();
    std::string n_base, n_x;
    int n_depth = 12;
    bool n_witness = false;
    c_count->add_option("--base", n_base)->required();
    c_count->add_option("--x", n_x, "target (real or a+bi)")->required();
    c_count->add_option("--depth", n_depth);
    c_count->add_flag("--witness", n_witness, "also report branch positions (positive real q)");

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "enumerate the 0/1-polynomial spectrum of x");
    c_spec->fallthrough();
    double s_x = 2.0;
    std::optional<double> s_bound;
    std::optional<std::uint64_t> s_count;
    double s_dedup = 1e-12;
    c_spec->add_option("--x", s_x)->required();
    c_spec->add_option("--bound", s_bound, "value bound");
    c_spec->add_option("--count", s_count, "point count bound");
    c_spec->add_option("--dedup", s_dedup, "dedup tolerance (relative)");

    // transform
    auto* c_tr = app.add_subcommand("transform", "apply the block-parity transform");
    c_tr->fallthrough();
    std::string t_digits;
    int t_mprime = 1;
    c_tr->add_option("--digits", t_digits, "digit word, head(tail)* allowed")->required();
    c_tr->add_option("--mprime", t_mprime, "block length m'");

    // bounds
    auto* c_bounds = app.add_subcommand("bounds", "containing region of J_q");
    c_bounds->fallthrough();
    std::string b_base;
    c_bounds->add_option("--base", b_base)->required();

    // universal
    auto* c_univ = app.add_subcommand("universal", "construct a universal prefix certificate");
    c_univ->fallthrough();
    std::string u_base, u_z, u_alpha, u_cert;
    int u_level = 0, u_blocks = 0;
    c_univ->add_option("--base", u_base)->required();
    c_univ->add_option("--z", u_z, "target point");
    c_univ->add_option("--alpha", u_alpha, "comma-separated frame coordinates");
    c_univ->add_option("--level", u_level, "cover all blocks of length <= L");
    c_univ->add_option("--blocks", u_blocks, "number of blocks to stitch");
    c_univ->add_option("--cert", u_cert, "write certificate JSON here");

    // verify
    auto* c_ver = app.add_subcommand("verify", "re-validate a universal certificate");
    c_ver->fallthrough();
    std::string v_path;
    c_ver->add_option("cert", v_path, "certificate file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config_file(opt.cfg, config_path);
        if (!precision_flag.empty())
            opt.cfg.precision = precision_flag == "extended" ? cbx::precision_mode::extended
                                                             : cbx::precision_mode::standard;

        if (c_expand->parsed()) {
            const auto base = cbx::base_q::parse(e_base);
            std::complex<double> target;
            if (!e_x.empty()) target = parse_complex(e_x);
            else if (!e_z.empty()) target = parse_complex(e_z);
            else cbx::fail(cbx::errc::invalid_argument, "expand: need --x or --z");

            json out{{"schema", 1}, {"command", "expand"}, {"base", base.str()},
                     {"x", cpx(target)}, {"depth", e_digits}};
            cbx::digit_sequence d;
            switch (base.family()) {
                case cbx::base_family::positive_real:
                    d = cbx::expand_positive(target.real(), base, e_digits);
                    break;
                case cbx::base_family::negative_real:
                    d = cbx::expand_negative_base(target.real(), base, e_digits);
                    break;
                case cbx::base_family::imaginary:
                    d = cbx::expand_imaginary(target, base, e_digits);
                    break;
                default: {
                    auto res = cbx::expand_complex_greedy(target, base, e_digits,
                                                          opt.cfg.backtrack_budget);
                    if (!res.ok) {
                        out["error"] = "expansion failed";
                        out["reached_depth"] = res.reached_depth;
                        out["nodes"] = res.nodes;
                        out["deepest_prefix"] = cbx::digit_sequence(res.digits).str();
                        std::cout << out.dump(2) << "\n";
                        return res.reached_depth == 0 ? 2 : 3;
                    }
                    d = cbx::digit_sequence(res.digits);
                    out["nodes"] = res.nodes;
                }
            }
            const auto ev = cbx::evaluate(d, base, e_digits);
            out["digits"] = d.str();
            out["value"] = cpx(ev.value);
            out["tail_radius"] = num(std::pow(base.p(), -double(e_digits)) / (base.p() - 1.0));
            out["residual"] = num(std::abs(ev.value - target));
            emit(out, opt.format, "digits");
            return 0;
        }

        if (c_count->parsed()) {
            const auto base = cbx::base_q::parse(n_base);
            const auto x = parse_complex(n_x);
            auto res = cbx::count_prefixes(x, base, n_depth);
            json out{{"schema", 1},       {"command", "count"}, {"base", base.str()},
                     {"x", cpx(x)},       {"depth", n_depth},   {"count", res.count},
                     {"exact", res.exact}};
            if (!res.exact) out["note"] = "upper-bound count (necessary pruning bound only)";
            if (n_witness) {
                auto w = cbx::branching_witness(x.real(), base, n_depth);
                out["branch_positions"] = w;
            }
            emit(out, opt.format, "count");
            return 0;
        }

        if (c_spec->parsed()) {
            cbx::spectrum_query q;
            q.x = s_x;
            q.value_bound = s_bound;
            q.count_bound = s_count;
            q.dedup_tolerance = s_dedup;
            q.point_cap = opt.cfg.spectrum_point_cap;
            auto pts = cbx::enumerate_spectrum(q);
            if (opt.format == "json") {
                json rows = json::array();
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    json r{{"index", i},
                           {"value", num(pts[i].value)},
                           {"coeffs", pts[i].coeff_bits()}};
                    if (i + 1 < pts.size()) r["gap_to_next"] = num(pts[i + 1].value - pts[i].value);
                    rows.push_back(std::move(r));
                }
                std::cout << json{{"schema", 1}, {"command", "spectrum"}, {"x", num(s_x)},
                                  {"points", rows}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << "index,value,gap_to_next,coeffs\n";
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    std::cout << i << "," << num(pts[i].value) << ",";
                    if (i + 1 < pts.size()) std::cout << num(pts[i + 1].value - pts[i].value);
                    std::cout << "," << pts[i].coeff_bits() << "\n";
                }
            }
            return 0;
        }

        if (c_tr->parsed()) {
            auto d = cbx::digit_sequence::parse(t_digits);
            auto td = cbx::transform_T(d, t_mprime);
            json out{{"schema", 1}, {"command", "transform"}, {"mprime", t_mprime},
                     {"input", d.str()}, {"digits", td.str()}};
            emit(out, opt.format, "digits");
            return 0;
        }

        if (c_bounds->parsed()) {
            const auto base = cbx::base_q::parse(b_base);
            const auto reg = cbx::jq_bounds(base);
            json out{{"schema", 1}, {"command", "bounds"}, {"base", base.str()},
                     {"full", cbx::is_full_region(base)}};
            if (auto* iv = reg.interval()) {
                out["kind"] = "interval";
                out["lo"] = num(iv->lo);
                out["hi"] = num(iv->hi);
            } else if (auto* r = reg.rectangle()) {
                out["kind"] = "rectangle";
                out["x_lo"] = num(r->x_lo);
                out["x_hi"] = num(r->x_hi);
                out["y_lo"] = num(r->y_lo);
                out["y_hi"] = num(r->y_hi);
            } else if (auto* ab = reg.alpha_box()) {
                out["kind"] = "alpha_box";
                out["m"] = ab->m;
                out["coord_lo"] = num(ab->lo);
                out["coord_hi"] = num(ab->hi);
            }
            emit(out, opt.format, "kind");
            return 0;
        }

        if (c_univ->parsed()) {
            const auto base = cbx::base_q::parse(u_base);
            const auto order = base.order();
            if (!order)
                cbx::fail(cbx::errc::precondition, "universal: base must be a root of unity");
            int num_blocks = u_blocks;
            int level = u_level;
            if (num_blocks <= 0) {
                if (level <= 0) cbx::fail(cbx::errc::invalid_argument,
                                          "universal: give --level or --blocks");
                if (level > 20) cbx::fail(cbx::errc::invalid_argument, "universal: level too large");
                num_blocks = int((std::uint64_t(1) << (level + 1)) - 2);
            }
            std::vector<double> alphas;
            if (!u_alpha.empty()) {
                std::string rest = u_alpha;
                while (!rest.empty()) {
                    auto comma = rest.find(',');
                    alphas.push_back(std::stod(rest.substr(0, comma)));
                    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
                }
            }

            json out{{"schema", 1}, {"command", "universal"}, {"base", base.str()},
                     {"num_blocks", num_blocks}, {"level", level}};
            cbx::certificate cert;
            if (*order % 2 == 0) {
                cbx::universal_even_result res =
                    alphas.empty()
                        ? cbx::universal_even(parse_complex(u_z), base, num_blocks, opt.cfg)
                        : cbx::universal_even_alpha(alphas, base, num_blocks, opt.cfg);
                cert = cbx::make_certificate(base, res, num_blocks, level);
                out["mode"] = "even";
                out["m_prime"] = res.m_prime;
                out["digits"] = cert.digits;
                for (const auto& w : res.warnings) out["warnings"].push_back(w);
            } else {
                cbx::alpha_vector av{base, {}};
                if (!alphas.empty()) av.alphas = alphas;
                else if (*order == 1) av.alphas = {parse_complex(u_z).real()};
                else av = cbx::decompose_alpha(parse_complex(u_z), base);
                auto res = cbx::universal_expansion(av, num_blocks, opt.cfg);
                cert = cbx::make_certificate(av, res, num_blocks, level);
                out["mode"] = "direct";
                out["digits"] = cert.digits;
                for (const auto& w : res.warnings) out["warnings"].push_back(w);
            }
            json cps = json::array();
            for (const auto& cp : cert.checkpoints)
                cps.push_back(json{{"i", cp.i}, {"n", cp.n}, {"N", cp.N}, {"block", cp.block}});
            out["checkpoints"] = std::move(cps);
            if (!u_cert.empty()) {
                cert.save(u_cert);
                out["certificate"] = u_cert;
            }
            emit(out, opt.format, "digits");
            return 0;
        }

        if (c_ver->parsed()) {
            const auto cert = cbx::certificate::load(v_path);
            const auto rep = cbx::verify_certificate(cert);
            for (const auto& line : rep.lines) std::cout << line << "\n";
            std::cout << (rep.ok ? "VALID" : "INVALID") << "\n";
            return rep.ok ? 0 : 2;
        }
    } catch (const cbx::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
