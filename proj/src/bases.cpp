#include "cbx/bases.hpp"
#include "cbx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace cbx {

namespace {

constexpr double axis_snap = 1e-15;

double snap(double v) {
    if (std::abs(v) < axis_snap) return 0.0;
    if (std::abs(v - 1.0) < axis_snap) return 1.0;
    if (std::abs(v + 1.0) < axis_snap) return -1.0;
    return v;
}

std::int64_t mod_pos(std::int64_t v, std::int64_t m) {
    std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

} // namespace

base_q::base_q(double p, bool rational, std::int64_t a, std::int64_t b, double theta)
    : p_(p), rational_(rational), a_(a), b_(b), theta_(theta) {
    if (!(p > 1.0)) fail(errc::invalid_argument, "base modulus p must be > 1");
    if (rational_) {
        if (b_ <= 0) fail(errc::invalid_argument, "rotation denominator must be positive");
        if (b_ > 1'000'000) fail(errc::invalid_argument, "rotation denominator too large");
        a_ = mod_pos(a_, b_);
        std::int64_t g = std::gcd(a_, b_);
        if (g == 0) g = 1; // a = 0
        if (a_ == 0) b_ = 1;
        else { a_ /= g; b_ /= g; }
        roots_.reserve(std::size_t(b_));
        for (std::int64_t k = 0; k < b_; ++k) {
            double ang = 2.0 * std::numbers::pi * double(k) / double(b_);
            roots_.emplace_back(snap(std::cos(ang)), snap(std::sin(ang)));
        }
    }
}

base_q base_q::positive(double p) { return base_q(p, true, 0, 1, 0.0); }
base_q base_q::negative(double p) { return base_q(p, true, 1, 2, 0.0); }
base_q base_q::imaginary(double p, bool positive) { return base_q(p, true, positive ? 1 : 3, 4, 0.0); }
base_q base_q::rotation(double p, std::int64_t a, std::int64_t b) { return base_q(p, true, a, b, 0.0); }
base_q base_q::angle(double p, double theta) { return base_q(p, false, 0, 1, theta); }

double base_q::theta() const {
    if (rational_) return 2.0 * std::numbers::pi * double(a_) / double(b_);
    return theta_;
}

std::optional<int> base_q::order() const {
    if (!rational_) return std::nullopt;
    return int(b_);
}

base_family base_q::family() const {
    if (!rational_) return base_family::free_angle;
    if (b_ == 1) return base_family::positive_real;
    if (b_ == 2) return base_family::negative_real;
    if (b_ == 4) return base_family::imaginary; // a = 1 or 3
    return base_family::root_of_unity;
}

std::complex<double> base_q::omega_pow(std::int64_t k) const {
    if (rational_) return roots_[std::size_t(mod_pos((a_ % b_) * mod_pos(k, b_), b_))];
    return std::polar(1.0, theta_ * double(k));
}

std::complex<double> base_q::q_pow(std::int64_t k) const {
    return std::pow(p_, double(k)) * omega_pow(k);
}

base_q base_q::squared() const {
    if (rational_) return base_q(p_ * p_, true, 2 * a_, b_, 0.0);
    return base_q(p_ * p_, false, 0, 1, 2.0 * theta_);
}

base_q base_q::parse(const std::string& text) {
    if (text.empty()) fail(errc::invalid_argument, "empty base spec");
    auto parse_p = [&](const std::string& s) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            fail(errc::invalid_argument, "bad base spec: " + text);
        }
        if (pos != s.size()) fail(errc::invalid_argument, "bad base spec: " + text);
        return v;
    };
    auto at = text.find('@');
    if (at != std::string::npos) {
        double p = parse_p(text.substr(0, at));
        std::string rot = text.substr(at + 1);
        if (rot.rfind("rad:", 0) == 0) return base_q::angle(p, parse_p(rot.substr(4)));
        auto slash = rot.find('/');
        if (slash == std::string::npos) fail(errc::invalid_argument, "bad rotation in base spec: " + text);
        std::int64_t a, b;
        try {
            a = std::stoll(rot.substr(0, slash));
            b = std::stoll(rot.substr(slash + 1));
        } catch (const std::exception&) {
            fail(errc::invalid_argument, "bad rotation in base spec: " + text);
        }
        return base_q::rotation(p, a, b);
    }
    if (text.size() > 2 && text.compare(text.size() - 2, 2, "*i") == 0)
        return base_q::imaginary(parse_p(text.substr(0, text.size() - 2)));
    double v = parse_p(text);
    if (v < 0) return base_q::negative(-v);
    return base_q::positive(v);
}

std::string base_q::str() const {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (!rational_) return num(p_) + "@rad:" + num(theta_);
    switch (family()) {
        case base_family::positive_real: return num(p_);
        case base_family::negative_real: return "-" + num(p_);
        case base_family::imaginary:
            return a_ == 1 ? num(p_) + "*i" : num(p_) + "@3/4";
        default: return num(p_) + "@" + std::to_string(a_) + "/" + std::to_string(b_);
    }
}

bool region::contains(std::complex<double> z, double slack) const {
    if (auto* iv = interval())
        return z.real() >= iv->lo - slack && z.real() <= iv->hi + slack && std::abs(z.imag()) <= slack;
    if (auto* r = rectangle())
        return z.real() >= r->x_lo - slack && z.real() <= r->x_hi + slack &&
               z.imag() >= r->y_lo - slack && z.imag() <= r->y_hi + slack;
    // Alpha boxes are only bounded here by the containing disk.
    const auto& ab = std::get<alpha_box_region>(shape);
    return std::abs(z) <= ab.disk_radius + slack;
}

evaluated_value evaluate(const digit_sequence& d, const base_q& q, int digits_K) {
    if (digits_K < 1) fail(errc::invalid_argument, "evaluate: K must be >= 1");
    const double p = q.p();
    std::complex<double> sum = 0.0;

    if (d.periodic()) {
        const auto& head = d.head();
        const auto& tail = d.tail();
        for (std::size_t k = 0; k < head.size(); ++k)
            if (head[k]) sum += q.q_pow(-std::int64_t(k) - 1);
        std::complex<double> tail_once = 0.0;
        for (std::size_t j = 0; j < tail.size(); ++j)
            if (tail[j]) tail_once += q.q_pow(-std::int64_t(j) - 1);
        std::complex<double> ratio = q.q_pow(-std::int64_t(tail.size()));
        sum += q.q_pow(-std::int64_t(head.size())) * tail_once / (1.0 - ratio);
        return {sum, 0.0};
    }

    const auto& head = d.head();
    const std::size_t take = std::min<std::size_t>(head.size(), std::size_t(digits_K));
    for (std::size_t k = 0; k < take; ++k)
        if (head[k]) sum += q.q_pow(-std::int64_t(k) - 1);
    double radius = 0.0;
    if (head.size() > std::size_t(digits_K))
        radius = std::pow(p, -double(digits_K)) / (p - 1.0);
    return {sum, radius};
}

region jq_bounds(const base_q& q) {
    const double p = q.p();
    switch (q.family()) {
        case base_family::positive_real:
            return {interval_region{0.0, 1.0 / (p - 1.0)}};
        case base_family::negative_real:
            return {interval_region{-p / (p * p - 1.0), 1.0 / (p * p - 1.0)}};
        case base_family::imaginary: {
            const double d4 = p * p * p * p - 1.0;
            rectangle_region r{-p * p / d4, 1.0 / d4, -p * p * p / d4, p / d4};
            if (q.rot_num() == 3) std::swap(r.y_lo, r.y_hi), r.y_lo = -r.y_lo, r.y_hi = -r.y_hi;
            return {r};
        }
        case base_family::root_of_unity: {
            const int m = *q.order();
            const double pm = std::pow(p, m);
            return {alpha_box_region{m, 0.0, 1.0 / (pm - 1.0), 1.0 / (p - 1.0)}};
        }
        case base_family::free_angle:
            fail(errc::unsupported_family, "jq_bounds: free-angle base has no finite order");
    }
    fail(errc::unsupported_family, "jq_bounds: unknown family");
}

bool is_full_region(const base_q& q) {
    const double p = q.p();
    switch (q.family()) {
        case base_family::positive_real: return p <= 2.0;
        case base_family::negative_real: return p <= 2.0;
        case base_family::imaginary: return p <= std::sqrt(2.0);
        case base_family::root_of_unity: return std::pow(p, *q.order()) <= 2.0;
        case base_family::free_angle:
            fail(errc::unsupported_family, "is_full_region: free-angle base");
    }
    fail(errc::unsupported_family, "is_full_region: unknown family");
}

double negative_base_image::offset(double p) { return p / (p * p - 1.0); }

negative_base_image negative_base_bijection(const digit_sequence& d) {
    return {transform_T(d, 1)};
}

split_sequences imaginary_split(const digit_sequence& d) {
    digit_word head = d.head();
    digit_word tail = d.tail();
    if (!tail.empty()) {
        // Even head length and even tail length keep parity aligned.
        if (head.size() % 2 != 0) {
            head.push_back(tail[0]);
            std::rotate(tail.begin(), tail.begin() + 1, tail.end());
        }
        if (tail.size() % 2 != 0) {
            digit_word twice = tail;
            twice.insert(twice.end(), tail.begin(), tail.end());
            tail = std::move(twice);
        }
    }
    auto pick = [](const digit_word& w, std::size_t start) {
        digit_word out;
        for (std::size_t i = start; i < w.size(); i += 2) out.push_back(w[i]);
        return out;
    };
    return {digit_sequence(pick(head, 0), pick(tail, 0)),
            digit_sequence(pick(head, 1), pick(tail, 1))};
}

} // namespace cbx
