#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct run_result {
    int code = -1;
    std::string out;
};

run_result run(const std::string& args) {
    const std::string cmd = std::string(CBX_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    run_result res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

} // namespace

TEST_CASE("expand: base-2 unit expansion") {
    auto r = run("expand --base 2 --x 1 --digits 20 --format text");
    CHECK(r.code == 0);
    CHECK(r.out == std::string(20, '1') + "\n");
}

TEST_CASE("expand: negative base endpoint pattern") {
    auto r = run("expand --base -1.5 --x -1.2 --digits 20 --format text");
    CHECK(r.code == 0);
    CHECK(r.out.substr(0, 8) == "10101010");
}

TEST_CASE("expand: general complex base") {
    auto r = run("expand --base 1.02@rad:1.0 --z 0.3+0.4i --digits 200");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"digits\"") != std::string::npos);
    CHECK(r.out.find("\"residual\"") != std::string::npos);
}

TEST_CASE("expand: representability failure exits 2") {
    auto r = run("expand --base -1.5 --x 9.0 --digits 20");
    CHECK(r.code == 2);
}

TEST_CASE("parse errors exit 1") {
    CHECK(run("expand --base bogus --x 1").code == 1);
    CHECK(run("count --base 0.5 --x 1").code == 1);
}

TEST_CASE("count matches the library and reports exactness") {
    auto r = run("count --base 1.5 --x 1 --depth 12");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"exact\": true") != std::string::npos);
    auto r2 = run("count --base 1.02@rad:1.0 --x 0.5 --depth 8");
    CHECK(r2.code == 0);
    CHECK(r2.out.find("upper-bound") != std::string::npos);
}

TEST_CASE("count at a golden-ratio-like base matches the brute oracle") {
    auto r = run("count --base 1.618033988 --x 1 --depth 12");
    CHECK(r.code == 0);
    const auto expect = oracle::brute_count_positive_leaf(1.0, 1.618033988, 12);
    CHECK(r.out.find("\"count\": " + std::to_string(expect)) != std::string::npos);
}

TEST_CASE("count witness positions") {
    auto r = run("count --base 1.5 --x 1 --depth 30 --witness");
    CHECK(r.code == 0);
    CHECK(r.out.find("branch_positions") != std::string::npos);
}

TEST_CASE("spectrum CSV output") {
    auto r = run("spectrum --x 2 --bound 10 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.substr(0, 30) == "index,value,gap_to_next,coeffs");
    // 11 data rows, all gaps 1
    int rows = 0;
    std::size_t pos = 0;
    while ((pos = r.out.find('\n', pos)) != std::string::npos) {
        ++pos;
        ++rows;
    }
    CHECK(rows == 12); // header + 11 points
    CHECK(r.out.find(",1,") != std::string::npos);
}

TEST_CASE("transform subcommand") {
    auto r = run("transform --mprime 1 --digits 110100 --format text");
    CHECK(r.code == 0);
    CHECK(r.out == "011110\n");
}

TEST_CASE("bounds subcommand emits the tagged region") {
    auto r = run("bounds --base 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"kind\": \"interval\"") != std::string::npos);
    CHECK(r.out.find("\"full\": true") != std::string::npos);
    auto r2 = run("bounds --base 1.2*i");
    CHECK(r2.out.find("rectangle") != std::string::npos);
    auto r3 = run("bounds --base 1.1@1/3");
    CHECK(r3.out.find("alpha_box") != std::string::npos);
}

TEST_CASE("universal to verify round trip") {
    const std::string cert = "cert_roundtrip.json";
    auto r = run("universal --base 1.05 --alpha 0.5 --level 5 --cert " + cert);
    CHECK(r.code == 0);
    auto v = run("verify " + cert);
    CHECK(v.code == 0);
    CHECK(v.out.find("VALID") != std::string::npos);
    std::remove(cert.c_str());
}

TEST_CASE("universal refuses p over the regime bound, exit 2") {
    auto r = run("universal --base 1.3 --alpha 0.5 --level 2");
    CHECK(r.code == 2);
}

TEST_CASE("universal even-order path via z") {
    const std::string cert = "cert_even.json";
    auto r = run("universal --base 1.05@1/2 --z -9.7439 --level 4 --cert " + cert);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"mode\": \"even\"") != std::string::npos);
    auto v = run("verify " + cert);
    CHECK(v.code == 0);
    std::remove(cert.c_str());
}

TEST_CASE("verify rejects a tampered certificate, exit 2") {
    const std::string cert = "cert_tamper.json";
    auto r = run("universal --base 1.05 --alpha 0.5 --level 3 --cert " + cert);
    REQUIRE(r.code == 0);
    std::ifstream in(cert);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto at = text.find("\"digits\": \"");
    REQUIRE(at != std::string::npos);
    const auto digit_at = at + 11;
    text[digit_at] = text[digit_at] == '0' ? '1' : '0';
    std::ofstream out(cert);
    out << text;
    out.close();
    auto v = run("verify " + cert);
    CHECK(v.code == 2);
    CHECK(v.out.find("INVALID") != std::string::npos);
    std::remove(cert.c_str());
}

TEST_CASE("byte-identical reruns") {
    const std::string args = "spectrum --x 1.7 --count 40 --format csv";
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run("expand --base 1.02@rad:1.0 --z 0.1+0.2i --digits 150");
    auto d = run("expand --base 1.02@rad:1.0 --z 0.1+0.2i --digits 150");
    CHECK(c.out == d.out);
}

TEST_CASE("config file controls knobs") {
    const std::string cfg = "cbx_config_test.json";
    {
        std::ofstream out(cfg);
        out << "{\"backtrack_budget\": 5, \"format\": \"json\"}\n";
    }
    // a tiny budget makes the complex expander fail with exit 3
    auto r = run("--config " + cfg + " expand --base 1.02@rad:1.0 --z 0.3+0.4i --digits 200");
    CHECK(r.code == 3);
    std::remove(cfg.c_str());
}
