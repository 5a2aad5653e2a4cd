#pragma once

// Unevaluated sum of two binary64 values (hi + lo, |lo| <= ulp(hi)/2),
// built from the TwoSum / FMA-TwoProd error-free transforms. Gives roughly
// 106 bits of significand, enough to resolve estimator errors well below one
// ulp of zeta(q). Algorithms follow the classic QD library formulation.

#include <cmath>
#include <compare>
#include <limits>

namespace dzeta {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT: implicit widening is intended
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    [[nodiscard]] constexpr double value() const { return hi + lo; }
    [[nodiscard]] bool is_finite() const { return std::isfinite(hi) && std::isfinite(lo); }
};

namespace detail {

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// Requires |a| >= |b|.
inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble s = detail::two_sum(a.hi, b.hi);
    const DoubleDouble t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator+(const DoubleDouble& a, double b) {
    DoubleDouble s = detail::two_sum(a.hi, b);
    s.lo += a.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator+(double a, const DoubleDouble& b) { return b + a; }
inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }
inline DoubleDouble operator-(const DoubleDouble& a, double b) { return a + (-b); }
inline DoubleDouble operator-(double a, const DoubleDouble& b) { return (-b) + a; }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(const DoubleDouble& a, double b) {
    DoubleDouble p = detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(double a, const DoubleDouble& b) { return b * a; }

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * q1;
    const double q2 = r.hi / b.hi;
    r = r - b * q2;
    const double q3 = r.hi / b.hi;
    return detail::quick_two_sum(q1, q2) + q3;
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }

inline bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi == b.hi && a.lo == b.lo;
}

inline std::partial_ordering operator<=>(const DoubleDouble& a, const DoubleDouble& b) {
    if (auto c = a.hi <=> b.hi; c != 0) return c;
    return a.lo <=> b.lo;
}

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble ldexp(const DoubleDouble& a, int e) {
    return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)};
}

inline DoubleDouble square(const DoubleDouble& a) { return a * a; }

// ln 2 to double-double precision.
inline constexpr DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

inline DoubleDouble exp(const DoubleDouble& a) {
    if (a.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -745.0) return {0.0, 0.0};
    if (a.hi == 0.0 && a.lo == 0.0) return {1.0, 0.0};

    // exp(a) = 2^k * (1 + s)^512 with |r| <= ln2/1024.
    const double k = std::floor(a.hi / kLn2.hi + 0.5);
    const DoubleDouble r = ldexp(a - kLn2 * k, -9);

    DoubleDouble s = r;
    DoubleDouble term = r;
    for (int i = 2; i < 16; ++i) {
        term = term * r / static_cast<double>(i);
        s += term;
        if (std::abs(term.hi) < 1e-34 * std::abs(s.hi)) break;
    }
    // (1 + s)^2 - 1 = 2s + s^2, applied nine times.
    for (int i = 0; i < 9; ++i) s = ldexp(s, 1) + square(s);
    return ldexp(s + 1.0, static_cast<int>(k));
}

// Natural log for a > 0: one Newton step on exp from the binary64 estimate.
inline DoubleDouble log(const DoubleDouble& a) {
    if (a.hi == 1.0 && a.lo == 0.0) return {0.0, 0.0};
    if (!(a.hi > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const DoubleDouble x{std::log(a.hi)};
    return x + a * exp(-x) - 1.0;
}

inline DoubleDouble pow(const DoubleDouble& base, double exponent) {
    if (exponent == 0.0) return {1.0, 0.0};
    if (base.hi == 1.0 && base.lo == 0.0) return {1.0, 0.0};
    return exp(log(base) * exponent);
}

}  // namespace dzeta
