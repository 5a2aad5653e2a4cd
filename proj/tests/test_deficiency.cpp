#include <doctest.h>

#include <cmath>
#include <random>

#include "dzeta/deficiency.hpp"
#include "dzeta/error.hpp"

using namespace dzeta;

namespace {

double ulp(double x) { return std::nextafter(std::abs(x), INFINITY) - std::abs(x); }

double error_of(const EstimatorKind& kind, const EstimatorContext& ctx, std::size_t n) {
    return abs(estimate(kind, ctx, n) - reference_zeta(ctx.target())).hi;
}

}  // namespace

TEST_CASE("ExponentPair enforces q > p > 1") {
    CHECK_THROWS_WITH_AS(ExponentPair(3, 3), doctest::Contains("requires q > p > 1"), ValidationError);
    CHECK_THROWS_AS(ExponentPair(4, 3), ValidationError);
    CHECK_THROWS_AS(ExponentPair(1, 3), ValidationError);
    CHECK_THROWS_AS(ExponentPair(2, NAN), ValidationError);
    const ExponentPair pair(2, 3);
    CHECK(pair.ratio() == 1.5);
    CHECK(pair.ratio() > 1.0);
}

TEST_CASE("deficiency_direct examples") {
    const ExponentPair p24(2, 4);
    const SeriesTable s2 = build_table(Exponent(2), 10);
    const SeriesTable s4 = build_table(Exponent(4), 10);
    CHECK(deficiency_direct(p24, s2, s4, 1).value() == 0.0);
    // (5/4)^2 - 17/16 = 1/2
    CHECK(deficiency_direct(p24, s2, s4, 2).value() == doctest::Approx(0.5).epsilon(1e-16));

    const ExponentPair p23(2, 3);
    const SeriesTable s3 = build_table(Exponent(3), 10);
    // mpmath: 1.25^1.5 - 1.125
    CHECK(deficiency_direct(p23, s2, s3, 2).value() == doctest::Approx(0.27254248593736856026).epsilon(1e-15));

    CHECK_THROWS_AS(deficiency_direct(p23, s2, s4, 2), ValidationError);
    CHECK_THROWS_AS(deficiency_direct(p23, s3, s3, 2), ValidationError);
    CHECK_THROWS_AS(deficiency_direct(p23, s2, s3, 11), ValidationError);
    CHECK_THROWS_AS(deficiency_direct(p23, s2, s3, 0), ValidationError);
}

TEST_CASE("deficiency_incremental examples") {
    const ExponentPair p24(2, 4);
    const SeriesTable s2 = build_table(Exponent(2), 1000);
    const DeficiencySeries d24 = deficiency_incremental(p24, s2, 10);
    CHECK(d24.at(1).value() == 0.0);
    CHECK(d24.at(2).value() == doctest::Approx(0.5).epsilon(1e-16));

    const ExponentPair p23(2, 3);
    const SeriesTable s3 = build_table(Exponent(3), 1000);
    const DeficiencySeries d23 = deficiency_incremental(p23, s2, 1000);
    CHECK(d23.at(1).value() == 0.0);
    CHECK(std::abs((d23.at(1000) - deficiency_direct(p23, s2, s3, 1000)).hi) <= 1e-12);

    CHECK_THROWS_AS(deficiency_incremental(p23, s2, 1001), ValidationError);
    CHECK_THROWS_AS(deficiency_incremental(p23, s3, 10), ValidationError);
    CHECK_THROWS_AS((void)d23.at(1001), ValidationError);
}

TEST_CASE("direct and incremental agree; increments nonnegative (randomized pairs)") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> base(1.2, 8.0);
    std::uniform_real_distribution<double> gap(0.5, 8.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double p = base(rng);
        const double q = p + gap(rng);
        CAPTURE(p);
        CAPTURE(q);
        const ExponentPair pair(p, q);
        const SeriesTable sp = build_table(pair.base(), 1000);
        const SeriesTable sq = build_table(pair.target(), 1000);
        const DeficiencySeries series = deficiency_incremental(pair, sp, 1000);
        const DoubleDouble cap = pow(reference_zeta(pair.base()), pair.ratio()) - reference_zeta(pair.target());
        for (std::size_t n : {10u, 100u, 1000u}) {
            const DoubleDouble direct = deficiency_direct(pair, sp, sq, n);
            const double diff = std::abs((series.at(n) - direct).hi);
            CHECK(diff <= std::max(1e-12 * std::abs(direct.hi), 1e-15));
        }
        for (std::size_t n = 2; n <= 1000; ++n) {
            CHECK(series.increment(n).hi >= -1e-15);
            CHECK(series.at(n) >= series.at(n - 1));
        }
        CHECK(series.at(1000).hi <= cap.hi + 1e-15);
        CHECK(series.at(1000).hi >= 0.0);
    }
}

TEST_CASE("sandwich T_n <= (S_n)^{q/p} <= zeta(p)^{q/p}") {
    for (auto [p, q] : {std::pair{2.0, 3.0}, {2.0, 4.0}, {4.0, 5.0}, {1.5, 6.2}, {6.0, 7.0}}) {
        const ExponentPair pair(p, q);
        const SeriesTable sp = build_table(pair.base(), 2000);
        const SeriesTable sq = build_table(pair.target(), 2000);
        const DoubleDouble ceiling = pow(reference_zeta(pair.base()), pair.ratio());
        for (std::size_t n = 1; n <= 2000; n += 37) {
            const DoubleDouble powered = pow(sp.at(n), pair.ratio());
            CHECK(sq.at(n) <= powered);
            CHECK(powered <= ceiling);
        }
    }
}

TEST_CASE("estimator examples") {
    const EstimatorContext ctx24(ExponentPair(2, 4), 10);
    // mpmath: zeta(2)^2
    CHECK(estimate(DeficiencyA{}, ctx24, 1).value() == doctest::Approx(2.7058080842778454788).epsilon(1e-15));

    const EstimatorContext trunc3(Exponent(3), std::nullopt, 2);
    CHECK(estimate(Truncation{}, trunc3, 2).value() == 1.125);
    CHECK_THROWS_AS(estimate(DeficiencyB{}, trunc3, 2), ValidationError);
    CHECK_THROWS_AS(estimate(Truncation{}, trunc3, 3), ValidationError);

    const EstimatorContext ctx23(ExponentPair(2, 3), 5000);
    const double err = error_of(DeficiencyB{}, ctx23, 5000);
    CHECK(err <= 10.0 / (5000.0 * 5000.0));
    // mpmath: |B_5000^(2,3) - zeta(3)| = 3.16893505401e-8
    CHECK(err == doctest::Approx(3.16893505401e-8).epsilon(1e-9));

    // Euler-Maclaurin goes through series_core with the table prefix.
    CHECK(estimate(EulerMaclaurin{0}, ctx23, 2).value() == 1.1875);
    CHECK(error_of(EulerMaclaurin{2}, ctx23, 100) <= 1e-10);
}

TEST_CASE("B estimator errors match the high-precision oracle well below one ulp") {
    // mpmath values from tests/oracles/compute_oracles.py
    const EstimatorContext ctx45(ExponentPair(4, 5), 5000);
    CHECK(error_of(DeficiencyB{}, ctx45, 500) == doctest::Approx(3.98402770743e-12).epsilon(1e-9));
    CHECK(error_of(DeficiencyB{}, ctx45, 5000) == doctest::Approx(3.99840027713e-16).epsilon(1e-6));
    const EstimatorContext ctx67(ExponentPair(6, 7), 340);
    CHECK(error_of(DeficiencyB{}, ctx67, 34) == doctest::Approx(9.86952627666e-11).epsilon(1e-9));
    CHECK(error_of(DeficiencyB{}, ctx67, 340) == doctest::Approx(1.06939831868e-16).epsilon(1e-5));
}

TEST_CASE("algebraic_form_a matches DeficiencyA within 4 ulp") {
    struct Case {
        double p, q;
        std::size_t n;
    };
    for (const Case c : {Case{2, 3, 10}, Case{2, 4, 1}, Case{4, 5, 100}, Case{2.5, 7.25, 777}}) {
        const EstimatorContext ctx(ExponentPair(c.p, c.q), c.n);
        const double a = estimate(DeficiencyA{}, ctx, c.n).value();
        const double alt = algebraic_form_a(ctx, c.n).value();
        CHECK(std::abs(a - alt) <= 4.0 * ulp(a));
    }
    const EstimatorContext ctx24(ExponentPair(2, 4), 1);
    CHECK(algebraic_form_a(ctx24, 1).value() == doctest::Approx(2.7058080842778454788).epsilon(1e-15));
}

TEST_CASE("bias correction: B beats A, B2 beats B") {
    const EstimatorContext ctx23(ExponentPair(2, 3), 10000);
    double previous_ratio = INFINITY;
    for (std::size_t n : {100u, 1000u, 10000u}) {
        const double ratio = error_of(DeficiencyB{}, ctx23, n) / error_of(DeficiencyA{}, ctx23, n);
        CHECK(ratio < previous_ratio);
        CHECK(ratio < 0.1);
        previous_ratio = ratio;
    }

    const EstimatorContext ctx25(ExponentPair(2, 5), 5000);
    for (std::size_t n = 100; n <= 5000; n += 100) {
        CHECK(error_of(DeficiencyB2{}, ctx25, n) <= error_of(DeficiencyB{}, ctx25, n));
    }
    // mpmath: |B_100^(2,5) - zeta(5)| = 2.37850e-4, |B2_100| = 2.37762e-7
    CHECK(error_of(DeficiencyB{}, ctx25, 100) == doctest::Approx(2.37850e-4).epsilon(1e-4));
    CHECK(error_of(DeficiencyB2{}, ctx25, 100) == doctest::Approx(2.37762e-7).epsilon(1e-4));
}

TEST_CASE("exact identity: A_N converges at the first-order bias rate") {
    const std::size_t big_n = 100000;
    for (auto [p, q] : {std::pair{2.0, 3.0}, {2.0, 4.0}, {4.0, 5.0}}) {
        const ExponentPair pair(p, q);
        const EstimatorContext ctx(pair, big_n);
        const double bound = 2.0 * pair.ratio() * std::pow(reference_zeta(pair.base()).hi, pair.ratio() - 1.0) *
                             tail_leading(pair.base(), big_n);
        CHECK(error_of(DeficiencyA{}, ctx, big_n) <= bound);
    }
}

TEST_CASE("rate theory helpers") {
    CHECK(predicted_rate(ExponentPair(2, 3)) == 2.0);
    CHECK(predicted_rate(ExponentPair(4, 5)) == 4.0);
    CHECK(predicted_rate(ExponentPair(2, 5)) == 2.0);
    CHECK(predicted_rate(ExponentPair(6, 7)) == 6.0);

    CHECK(balancing_threshold(3) == 2.0);
    CHECK(balancing_threshold(5) == 3.0);
    CHECK(balancing_threshold(7) == 4.0);
    CHECK_THROWS_AS(balancing_threshold(2), ValidationError);
    CHECK_THROWS_AS(balancing_threshold(1.5), ValidationError);

    CHECK(in_optimal_region(ExponentPair(2, 3)));
    CHECK(in_optimal_region(ExponentPair(4, 5)));
    CHECK_FALSE(in_optimal_region(ExponentPair(2, 5)));
    // p = q - 1 sits inside the region, so it attains q - 1 as well.
    for (double q : {3.0, 5.0, 7.0, 9.0}) {
        CHECK(predicted_rate(ExponentPair(q - 1, q)) == q - 1);
        CHECK(predicted_rate(ExponentPair(balancing_threshold(q), q)) == q - 1);
    }

    CHECK(recommended_base(3, BaseStrategy::ExplicitEven).value() == 2.0);
    CHECK(recommended_base(7, BaseStrategy::ExplicitEven).value() == 6.0);
    CHECK(recommended_base(5, BaseStrategy::Universal).value() == 2.0);
    CHECK_THROWS_AS(recommended_base(4, BaseStrategy::ExplicitEven), ValidationError);
    CHECK_THROWS_AS(recommended_base(5.5, BaseStrategy::ExplicitEven), ValidationError);
    CHECK_THROWS_AS(recommended_base(1, BaseStrategy::ExplicitEven), ValidationError);

    CHECK(estimator_rate(Truncation{}, 5, std::nullopt) == 4.0);
    CHECK(estimator_rate(DeficiencyB{}, 5, 4.0) == 4.0);
    CHECK(estimator_rate(DeficiencyA{}, 5, 2.0) == 1.0);
    CHECK(estimator_rate(DeficiencyB2{}, 5, 2.0) == 3.0);
    CHECK(estimator_rate(EulerMaclaurin{2}, 3, std::nullopt) == 8.0);
}

TEST_CASE("estimator tokens") {
    CHECK(std::holds_alternative<Truncation>(parse_estimator("trunc")));
    CHECK(std::holds_alternative<DeficiencyB2>(parse_estimator("b2")));
    CHECK(std::get<EulerMaclaurin>(parse_estimator("em:6")).correction_order == 6);
    CHECK(estimator_name(parse_estimator("em:3")) == "em:3");
    CHECK_THROWS_AS(parse_estimator("c"), ValidationError);
    CHECK_THROWS_AS(parse_estimator("em:"), ValidationError);
    CHECK_THROWS_AS(parse_estimator("em:-1"), ValidationError);
    CHECK_THROWS_AS(parse_estimator("em:21"), ValidationError);
    CHECK(min_n(EulerMaclaurin{1}) == 2);
    CHECK(min_n(DeficiencyB{}) == 1);
}
