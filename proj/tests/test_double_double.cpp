#include <doctest.h>

#include <cmath>
#include <random>

#include "dzeta/double_double.hpp"

using dzeta::DoubleDouble;

namespace {

double rel(const DoubleDouble& got, const DoubleDouble& want) {
    return std::abs((got - want).hi) / std::abs(want.hi);
}

}  // namespace

TEST_CASE("error-free sum keeps the rounding residual") {
    const DoubleDouble s = DoubleDouble{1.0} + 1e-20;
    CHECK(s.hi == 1.0);
    CHECK(s.lo == 1e-20);
    CHECK((s - 1.0).hi == 1e-20);
}

TEST_CASE("TwoSum is exact on random operands") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = dist(rng);
        const double b = dist(rng) * 1e-3;
        const DoubleDouble s = DoubleDouble{a} + b;
        // x87 long double carries 64 bits, enough to hold a + b exactly here.
        const long double exact = static_cast<long double>(a) + static_cast<long double>(b);
        CHECK(static_cast<long double>(s.hi) + static_cast<long double>(s.lo) == exact);
    }
}

TEST_CASE("exp and log reach double-double accuracy") {
    const DoubleDouble e{2.718281828459045091e+00, 1.445646891729250158e-16};
    CHECK(rel(dzeta::exp(DoubleDouble{1.0}), e) < 1e-30);
    CHECK(rel(dzeta::log(DoubleDouble{2.0}), dzeta::kLn2) < 1e-30);
    CHECK(rel(dzeta::log(e), DoubleDouble{1.0}) < 1e-30);

    const DoubleDouble root2 = dzeta::pow(DoubleDouble{2.0}, 0.5);
    CHECK(rel(root2 * root2, DoubleDouble{2.0}) < 1e-30);

    CHECK(dzeta::exp(DoubleDouble{0.0}) == DoubleDouble{1.0});
    CHECK(dzeta::pow(DoubleDouble{1.0}, 3.7) == DoubleDouble{1.0});
    CHECK(dzeta::exp(DoubleDouble{-800.0}).hi == 0.0);
    CHECK(std::isinf(dzeta::exp(DoubleDouble{800.0}).hi));
}

TEST_CASE("exp(log(x)) round-trips over a wide range") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const DoubleDouble x = dzeta::exp(DoubleDouble{dist(rng)});
        CHECK(rel(dzeta::exp(dzeta::log(x)), x) < 1e-29);
    }
}

TEST_CASE("division inverts multiplication") {
    const DoubleDouble third = DoubleDouble{1.0} / DoubleDouble{3.0};
    CHECK(rel(third * 3.0, DoubleDouble{1.0}) < 1e-31);
    CHECK(DoubleDouble{1.0} < DoubleDouble{1.0, 1e-20});
    CHECK(dzeta::abs(DoubleDouble{-2.0, -1e-17}) == DoubleDouble{2.0, 1e-17});
}
