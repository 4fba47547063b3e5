#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cbx/bases.hpp"
#include "cbx/errors.hpp"
#include "cbx/expansions.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace cbx;
using doctest::Approx;

namespace {

digit_word w(const std::string& s) {
    digit_word out;
    for (char c : s) out.push_back(std::uint8_t(c - '0'));
    return out;
}

} // namespace

TEST_CASE("base parsing round trips") {
    auto b1 = base_q::parse("2");
    CHECK(b1.family() == base_family::positive_real);
    CHECK(b1.order() == 1);

    auto b2 = base_q::parse("-1.5");
    CHECK(b2.family() == base_family::negative_real);
    CHECK(b2.p() == 1.5);
    CHECK(b2.q().real() == Approx(-1.5));
    CHECK(b2.order() == 2);

    auto b3 = base_q::parse("1.2*i");
    CHECK(b3.family() == base_family::imaginary);
    CHECK(b3.q().imag() == Approx(1.2));
    CHECK(b3.q().real() == 0.0);
    CHECK(b3.order() == 4);

    auto b4 = base_q::parse("1.05@1/2");
    CHECK(b4.family() == base_family::negative_real);

    auto b5 = base_q::parse("1.02@rad:1.0");
    CHECK(b5.family() == base_family::free_angle);
    CHECK(!b5.order());

    auto b6 = base_q::parse("1.04@1/3");
    CHECK(b6.family() == base_family::root_of_unity);
    CHECK(b6.order() == 3);

    CHECK_THROWS_AS(base_q::parse("1.0"), error);  // p must exceed 1
    CHECK_THROWS_AS(base_q::parse("abc"), error);
    CHECK_THROWS_AS(base_q::parse("2@x"), error);
}

TEST_CASE("rational rotations square exactly") {
    auto im = base_q::imaginary(1.3);
    auto sq = im.squared();
    CHECK(sq.family() == base_family::negative_real);
    CHECK(sq.p() == Approx(1.69));
    CHECK(sq.q().imag() == 0.0);
    auto third = base_q::rotation(1.04, 1, 3).squared();
    CHECK(third.order() == 3); // (e^{2pi i/3})^2 has order 3
}

TEST_CASE("evaluate: base-2 ones, golden ratio identity, (10)* in base -1.5") {
    // 1^inf in base 2 evaluates to exactly 1
    auto ones = digit_sequence::parse("(1)*");
    auto ev = evaluate(ones, base_q::positive(2.0), 10);
    CHECK(ev.value.real() == Approx(1.0).epsilon(1e-15));
    CHECK(ev.tail_radius == 0.0);

    // 1/phi + 1/phi^2 = 1
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    auto ev2 = evaluate(digit_sequence(w("11")), base_q::positive(phi), 10);
    CHECK(ev2.value.real() == Approx(1.0).epsilon(1e-15));

    // (10)^inf in base -1.5 evaluates to q/(q^2-1) = -1.2
    auto ev3 = evaluate(digit_sequence::parse("(10)*"), base_q::negative(1.5), 10);
    CHECK(ev3.value.real() == Approx(-1.2).epsilon(1e-14));
    CHECK(ev3.value.imag() == 0.0);
    CHECK(ev3.tail_radius == 0.0);
}

TEST_CASE("evaluate truncation radius") {
    digit_word long_word(100, 1);
    auto ev = evaluate(digit_sequence(long_word), base_q::positive(1.5), 20);
    CHECK(ev.tail_radius == Approx(std::pow(1.5, -20.0) / 0.5));
    // truncated value matches the oracle over the first 20 digits
    digit_word head20(long_word.begin(), long_word.begin() + 20);
    CHECK(ev.value.real() == Approx(double(oracle::eval_word_real(head20, 1.5L))).epsilon(1e-14));
}

TEST_CASE("jq_bounds per family") {
    auto r1 = jq_bounds(base_q::positive(2.0));
    REQUIRE(r1.interval());
    CHECK(r1.interval()->lo == 0.0);
    CHECK(r1.interval()->hi == Approx(1.0));

    auto r2 = jq_bounds(base_q::negative(1.5));
    REQUIRE(r2.interval());
    CHECK(r2.interval()->lo == Approx(-1.2));
    CHECK(r2.interval()->hi == Approx(0.8));

    auto r3 = jq_bounds(base_q::imaginary(1.2));
    REQUIRE(r3.rectangle());
    const double d4 = std::pow(1.2, 4.0) - 1.0;
    CHECK(r3.rectangle()->x_lo == Approx(-1.44 / d4));
    CHECK(r3.rectangle()->x_hi == Approx(1.0 / d4));
    CHECK(r3.rectangle()->y_lo == Approx(-std::pow(1.2, 3.0) / d4));
    CHECK(r3.rectangle()->y_hi == Approx(1.2 / d4));
    CHECK(r3.rectangle()->x_lo == Approx(-1.34128).epsilon(1e-5));
    CHECK(r3.rectangle()->x_hi == Approx(0.93145).epsilon(1e-5));
    CHECK(r3.rectangle()->y_lo == Approx(-1.60953).epsilon(1e-5));
    CHECK(r3.rectangle()->y_hi == Approx(1.11773).epsilon(1e-5));

    // -ip mirrors the imaginary-axis bounds
    auto r4 = jq_bounds(base_q::imaginary(1.2, false));
    REQUIRE(r4.rectangle());
    CHECK(r4.rectangle()->y_lo == Approx(-1.2 / d4));
    CHECK(r4.rectangle()->y_hi == Approx(std::pow(1.2, 3.0) / d4));

    auto r5 = jq_bounds(base_q::rotation(1.1, 1, 3));
    REQUIRE(r5.alpha_box());
    CHECK(r5.alpha_box()->m == 3);
    CHECK(r5.alpha_box()->lo == 0.0);
    CHECK(r5.alpha_box()->hi == Approx(1.0 / (std::pow(1.1, 3.0) - 1.0)));

    CHECK_THROWS_AS(jq_bounds(base_q::angle(1.02, 1.0)), error);
}

TEST_CASE("is_full_region thresholds, closed boundaries") {
    CHECK(is_full_region(base_q::positive(1.7)));
    CHECK(is_full_region(base_q::positive(2.0)));
    CHECK(!is_full_region(base_q::positive(2.5)));
    CHECK(is_full_region(base_q::negative(2.0)));
    CHECK(!is_full_region(base_q::negative(2.2)));
    CHECK(is_full_region(base_q::imaginary(1.2)));
    CHECK(!is_full_region(base_q::imaginary(1.5)));
    CHECK(is_full_region(base_q::rotation(std::pow(2.0, 1.0 / 3.0) - 1e-12, 1, 3)));
    CHECK(!is_full_region(base_q::rotation(1.3, 1, 3)));
}

TEST_CASE("negative base bijection endpoints") {
    // (10)^inf maps to 0^inf, (01)^inf maps to 1^inf
    auto img1 = negative_base_bijection(digit_sequence::parse("(10)*"));
    CHECK(!img1.transformed.periodic());
    CHECK(img1.transformed.prefix(8) == digit_word(8, 0));

    auto img2 = negative_base_bijection(digit_sequence::parse("(01)*"));
    CHECK(img2.transformed.prefix(8) == digit_word(8, 1));

    // endpoint values: x = -p/(p^2-1) maps to 0, x = 1/(p^2-1) maps to 1/(p-1)
    for (double p : {1.3, 1.7, 2.0}) {
        const double off = negative_base_image::offset(p);
        CHECK(-p / (p * p - 1.0) + off == Approx(0.0).epsilon(1e-14));
        CHECK(1.0 / (p * p - 1.0) + off == Approx(1.0 / (p - 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("negative base bijection identity on random words") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const double p = 1.0 + 1e-3 + (trial % 10) * 0.0999;
        const std::size_t len = 1 + rng() % 50;
        digit_word word;
        for (std::size_t i = 0; i < len; ++i) word.push_back(std::uint8_t(rng() & 1));
        digit_sequence d(word); // d 0^inf
        auto img = negative_base_bijection(d);

        // lhs: value of d in base -p; rhs: value of T(d 0^inf) in base p minus offset
        auto lhs = evaluate(d, base_q::negative(p), 60);
        auto rhs_seq = transform_T(d, 1); // finite-word transform of the head
        // past the head, zeros transform to 1 at odd and 0 at even positions
        digit_word rhs_head = rhs_seq.head();
        if (rhs_head.size() % 2 == 1) rhs_head.push_back(0); // even position: copied zero
        digit_sequence rhs_full(rhs_head, w("10"));
        auto rhs = evaluate(rhs_full, base_q::positive(p), 60);
        const double offset = negative_base_image::offset(p);
        CHECK(std::abs(lhs.value.real() - (rhs.value.real() - offset)) < 1e-10);
    }
}

TEST_CASE("bijection round trip is the identity") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        digit_word word;
        for (int i = 0; i < 24; ++i) word.push_back(std::uint8_t(rng() & 1));
        digit_sequence d(word);
        auto once = negative_base_bijection(d);
        auto twice = negative_base_bijection(once.transformed);
        CHECK(twice.transformed == d);
    }
}

TEST_CASE("imaginary split examples and recombination") {
    auto s = imaginary_split(digit_sequence::parse("(1000)*"));
    CHECK(s.odd.str() == "(10)*");
    CHECK(!s.even.periodic());
    CHECK(s.even.head().empty());

    auto z = imaginary_split(digit_sequence{});
    CHECK(z.odd.prefix(4) == digit_word(4, 0));

    // vertex value for q = ip: (1000)^inf evaluates to q^3/(q^4-1)
    const double p = 1.2;
    auto q = base_q::imaginary(p);
    auto ev = evaluate(digit_sequence::parse("(1000)*"), q, 40);
    const double d4 = std::pow(p, 4.0) - 1.0;
    CHECK(ev.value.real() == Approx(0.0));
    CHECK(ev.value.imag() == Approx(-std::pow(p, 3.0) / d4).epsilon(1e-13));

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const double pp = 1.05 + 0.3 * double(trial % 10) / 10.0;
        auto qq = base_q::imaginary(pp);
        digit_word word;
        const std::size_t len = 1 + rng() % 80;
        for (std::size_t i = 0; i < len; ++i) word.push_back(std::uint8_t(rng() & 1));
        digit_sequence d(word);
        auto parts = imaginary_split(d);
        auto whole = evaluate(d, qq, 80);
        auto odd = evaluate(parts.odd, qq.squared(), 80);
        auto even = evaluate(parts.even, qq.squared(), 80);
        auto recombined = qq.q() * odd.value + even.value;
        CHECK(std::abs(whole.value - recombined) < 1e-10);
    }
}

TEST_CASE("evaluated values stay inside jq_bounds") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        digit_word word;
        const std::size_t len = 1 + rng() % 60;
        for (std::size_t i = 0; i < len; ++i) word.push_back(std::uint8_t(rng() & 1));
        digit_sequence d(word);
        const int which = trial % 3;
        base_q q = which == 0   ? base_q::positive(1.0 + 1e-3 + (rng() % 1000) / 1000.0)
                   : which == 1 ? base_q::negative(1.0 + 1e-3 + (rng() % 1000) / 1000.0)
                                : base_q::imaginary(1.0 + 1e-3 + (rng() % 400) / 1000.0);
        auto ev = evaluate(d, q, 80);
        CHECK(jq_bounds(q).contains(ev.value, ev.tail_radius + 1e-12));
    }
}

TEST_CASE("evaluated values obey the all-ones tail bound") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 120; ++trial) {
        digit_word word;
        const std::size_t len = 1 + rng() % 50;
        for (std::size_t i = 0; i < len; ++i) word.push_back(std::uint8_t(rng() & 1));
        const double p = 1.0 + 1e-2 + double(rng() % 900) / 1000.0;
        base_q q = base_q::positive(2.0);
        switch (trial % 5) {
            case 0: q = base_q::positive(p); break;
            case 1: q = base_q::negative(p); break;
            case 2: q = base_q::imaginary(std::min(p, 1.4)); break;
            case 3: q = base_q::rotation(std::min(p, 1.2), 1, 5); break;
            case 4: q = base_q::angle(std::min(p, 1.2), 0.7); break;
        }
        auto ev = evaluate(digit_sequence(word), q, 60);
        const double pp = q.p();
        const double allones =
            (1.0 / pp) * (1.0 - std::pow(pp, -60.0)) / (1.0 - 1.0 / pp) + ev.tail_radius;
        CHECK(std::abs(ev.value) <= allones + 1e-12);
    }
}

TEST_CASE("endpoint uniqueness at finite depth") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const double q = 1.0 + 1e-6 + double(rng() % 100000) / 100000.0;
        auto base = base_q::positive(q);
        CHECK(count_prefixes(0.0, base, 40).count == 1);
        CHECK(count_prefixes(1.0 / (q - 1.0), base, 40).count == 1);
    }
    // negative-base endpoints and imaginary-base extreme points, checked with the
    // exact interval/rectangle regions
    for (double p : {1.3, 1.7, 2.0}) {
        auto nb = base_q::negative(p);
        CHECK(count_prefixes(-p / (p * p - 1.0), nb, 40).count == 1);
        CHECK(count_prefixes(1.0 / (p * p - 1.0), nb, 40).count == 1);
    }
    // Imaginary-base axis-extreme points (values of (1000)*, (0100)*, ...) are
    // unique exactly when x = 0 is forced in base -p^2, i.e. p^2 >= phi.
    // Rectangle corners combine two forced endpoints and are always unique.
    for (double p : {1.3, std::sqrt(2.0)}) {
        auto iq = base_q::imaginary(p);
        const double d4 = std::pow(p, 4.0) - 1.0;
        const std::complex<double> qc = iq.q();
        const std::complex<double> v1 = qc * qc * qc / d4;
        for (auto v : {v1, v1 / qc, v1 / (qc * qc), v1 / (qc * qc * qc)})
            CHECK(count_prefixes(v, iq, 40).count == 1);
    }
    for (double p : {1.1, 1.3, std::sqrt(2.0)}) {
        auto iq = base_q::imaginary(p);
        const double d4 = std::pow(p, 4.0) - 1.0;
        const double x_lo = -p * p / d4, x_hi = 1.0 / d4;
        const double y_lo = -p * p * p / d4, y_hi = p / d4;
        for (auto corner : {std::complex<double>{x_lo, y_lo}, std::complex<double>{x_lo, y_hi},
                            std::complex<double>{x_hi, y_lo}, std::complex<double>{x_hi, y_hi}})
            CHECK(count_prefixes(corner, iq, 40).count == 1);
    }
    // below the threshold the even part x = 0 branches, so the axis point
    // has multiple feasible prefixes
    {
        auto iq = base_q::imaginary(1.1);
        const double d4 = std::pow(1.1, 4.0) - 1.0;
        const std::complex<double> v1 = iq.q() * iq.q() * iq.q() / d4;
        CHECK(count_prefixes(v1, iq, 20).count > 1);
    }
}
