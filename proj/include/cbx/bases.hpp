#pragma once

#include "cbx/digits.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cbx {

enum class base_family {
    positive_real,  // omega = 1
    negative_real,  // omega = -1
    imaginary,      // omega = +-i
    root_of_unity,  // omega^m = 1, other m >= 3
    free_angle,     // omega = e^{i theta}, no finite order
};

// Base q = p * omega with modulus p > 1. omega is either an exact rational
// rotation a/b (powers computed by index arithmetic mod b, no drift) or a
// free angle in radians.
class base_q {
public:
    static base_q positive(double p);                       // q = p
    static base_q negative(double p);                       // q = -p
    static base_q imaginary(double p, bool positive = true); // q = +-i p
    static base_q rotation(double p, std::int64_t a, std::int64_t b); // omega = e^{2 pi i a/b}
    static base_q angle(double p, double theta);            // omega = e^{i theta}

    // Spec forms: "p", "-p", "p*i", "p@a/b", "p@rad:theta".
    static base_q parse(const std::string& text);
    std::string str() const;

    double p() const noexcept { return p_; }
    bool rational_rotation() const noexcept { return rational_; }
    std::int64_t rot_num() const noexcept { return a_; }
    std::int64_t rot_den() const noexcept { return b_; }
    double theta() const;

    // Smallest m with omega^m = 1; absent for free angles.
    std::optional<int> order() const;
    base_family family() const;

    std::complex<double> omega() const { return omega_pow(1); }
    std::complex<double> q() const { return p_ * omega(); }
    // (p*omega)^k, exact rotation index arithmetic for rational omega.
    std::complex<double> q_pow(std::int64_t k) const;
    std::complex<double> omega_pow(std::int64_t k) const;

    base_q squared() const; // base q^2

private:
    base_q(double p, bool rational, std::int64_t a, std::int64_t b, double theta);

    double p_ = 2.0;
    bool rational_ = true;
    std::int64_t a_ = 0, b_ = 1; // omega = e^{2 pi i a/b}, gcd(a,b)=1, 0 <= a < b
    double theta_ = 0.0;         // used when !rational_
    std::vector<std::complex<double>> roots_; // b_ unit roots for rational omega
};

// The representable-set bound J_q in one of three shapes.
struct interval_region {
    double lo, hi;
};
struct rectangle_region {
    double x_lo, x_hi, y_lo, y_hi;
};
struct alpha_box_region {
    int m;               // frame {(p omega)^{m-j}}, j = 1..m
    double lo, hi;       // identical per-coordinate bounds [0, 1/(p^m-1)]
    double disk_radius;  // containing disk 1/(p-1), for necessary-bound checks
};
struct region {
    std::variant<interval_region, rectangle_region, alpha_box_region> shape;

    const interval_region* interval() const { return std::get_if<interval_region>(&shape); }
    const rectangle_region* rectangle() const { return std::get_if<rectangle_region>(&shape); }
    const alpha_box_region* alpha_box() const { return std::get_if<alpha_box_region>(&shape); }
    bool contains(std::complex<double> z, double slack = 0.0) const;
};

// Truncated evaluation with a rigorous bound on the discarded tail.
struct evaluated_value {
    std::complex<double> value;
    double tail_radius; // |sum_{k>K} c_k q^-k| <= p^-K/(p-1); 0 when exact
};

// value = sum_{k=1..K} c_k q^-k, with an exact closed-form tail when d is
// eventually periodic (tail_radius 0 up to round-off).
evaluated_value evaluate(const digit_sequence& d, const base_q& q, int digits_K);

// Containing region for J_q per family; error for free angles.
region jq_bounds(const base_q& q);

// True iff J_q fills its jq_bounds region (q<=2, p<=2, |q|<=sqrt 2, p^m<=2).
bool is_full_region(const base_q& q);

// The negative-base correspondence: (c_k) expands x in base -p iff
// transform(c,1) expands x + p/(p^2-1) in base p.
struct negative_base_image {
    digit_sequence transformed;          // T(d, 1)
    static double offset(double p);      // p -> p/(p^2-1)
};
negative_base_image negative_base_bijection(const digit_sequence& d);

// Odd/even digit split behind J_q = q J_{q^2} + J_{q^2}:
// evaluate(d, q) = q * evaluate(odd, q^2) + evaluate(even, q^2).
struct split_sequences {
    digit_sequence odd;  // c1, c3, c5, ...
    digit_sequence even; // c2, c4, c6, ...
};
split_sequences imaginary_split(const digit_sequence& d);

} // namespace cbx
