#include "dzeta/series_core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "dzeta/error.hpp"

namespace dzeta {

namespace {

std::string fmt(double x) { return std::to_string(x); }

bool is_small_integer(double s) { return s == std::floor(s) && s >= 1.0 && s <= 64.0; }

DoubleDouble integer_power(DoubleDouble base, unsigned e) {
    DoubleDouble result{1.0};
    while (e != 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e != 0) base = square(base);
    }
    return result;
}

}  // namespace

Exponent::Exponent(double value) : value_(value) {
    if (!std::isfinite(value)) throw ValidationError("exponent must be finite");
    if (!(value > 1.0)) throw ValidationError("exponent must be > 1 (got " + fmt(value) + ")");
}

bool Exponent::is_integer() const { return value_ == std::floor(value_); }

DoubleDouble inverse_power(double k, double s) {
    if (k == 1.0) return {1.0};
    if (is_small_integer(s)) {
        const DoubleDouble denom = integer_power(DoubleDouble{k}, static_cast<unsigned>(s));
        if (!std::isfinite(denom.hi)) return {0.0};
        return DoubleDouble{1.0} / denom;
    }
    return exp(log(DoubleDouble{k}) * (-s));
}

DoubleDouble partial_sum_dd(Exponent exponent, std::size_t n) {
    if (n == 0) throw ValidationError("partial_sum requires n >= 1");
    DoubleDouble sum;
    for (std::size_t k = 1; k <= n; ++k) sum += inverse_power(static_cast<double>(k), exponent.value());
    return sum;
}

double partial_sum(Exponent exponent, std::size_t n) { return partial_sum_dd(exponent, n).hi; }

SeriesTable::SeriesTable(Exponent exponent, std::size_t n_max, TableLimits limits)
    : exponent_(exponent) {
    if (n_max == 0) throw ValidationError("series table requires n_max >= 1");
    if (n_max > limits.max_entries) {
        throw ValidationError("series table of " + std::to_string(n_max) +
                              " entries exceeds the memory cap of " +
                              std::to_string(limits.max_entries));
    }
    prefix_.reserve(n_max);
    DoubleDouble sum;
    for (std::size_t k = 1; k <= n_max; ++k) {
        sum += inverse_power(static_cast<double>(k), exponent.value());
        prefix_.push_back(sum);
    }
}

const DoubleDouble& SeriesTable::at(std::size_t n) const {
    if (n == 0 || n > prefix_.size()) {
        throw ValidationError("index n=" + std::to_string(n) + " outside table range [1, " +
                              std::to_string(prefix_.size()) + "]");
    }
    return prefix_[n - 1];
}

SeriesTable build_table(Exponent exponent, std::size_t n_max, TableLimits limits) {
    return SeriesTable(exponent, n_max, limits);
}

double tail_leading(Exponent exponent, std::size_t n) {
    if (n == 0) throw ValidationError("tail_leading requires n >= 1");
    const double s = exponent.value();
    return 1.0 / ((s - 1.0) * std::pow(static_cast<double>(n), s - 1.0));
}

BernoulliCache::BernoulliCache(int max_index) {
    if (max_index < 1 || max_index > kBernoulliCap) {
        throw ValidationError("Bernoulli index must lie in [1, " + std::to_string(kBernoulliCap) +
                              "] (got " + std::to_string(max_index) + ")");
    }
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;

    // sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
    std::vector<cpp_rational> exact{cpp_rational(1)};
    for (int m = 1; m <= max_index; ++m) {
        cpp_rational acc(0);
        cpp_int binom(1);  // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            acc += cpp_rational(binom) * exact[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        exact.push_back(-acc / (m + 1));
    }
    values_.reserve(exact.size());
    for (const auto& b : exact) values_.push_back(b.convert_to<double>());
}

double BernoulliCache::operator[](int index) const {
    if (index < 0 || index > max_index()) {
        throw ValidationError("Bernoulli index " + std::to_string(index) + " not cached");
    }
    return values_[static_cast<std::size_t>(index)];
}

BernoulliCache bernoulli(int max_index) { return BernoulliCache(max_index); }

namespace {

const BernoulliCache& full_bernoulli() {
    static const BernoulliCache cache(kBernoulliCap);
    return cache;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double even_zeta_closed_form(int m) {
    if (m < 1 || 2 * m > kBernoulliCap) {
        throw ValidationError("even_zeta_closed_form requires 1 <= m <= " +
                              std::to_string(kBernoulliCap / 2));
    }
    const double b = full_bernoulli()[2 * m];
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    return sign * b * std::pow(2.0 * std::numbers::pi, 2 * m) / (2.0 * factorial(2 * m));
}

DoubleDouble euler_maclaurin_from_prefix(Exponent q, std::size_t n, const DoubleDouble& prefix,
                                         int correction_order) {
    if (n < 2) throw ValidationError("Euler-Maclaurin evaluation requires n >= 2");
    if (correction_order < 0 || 2 * correction_order > kBernoulliCap) {
        throw ValidationError("Euler-Maclaurin correction order must lie in [0, " +
                              std::to_string(kBernoulliCap / 2) + "]");
    }
    const double s = q.value();
    const double nd = static_cast<double>(n);
    const DoubleDouble n_pow = inverse_power(nd, s);  // n^-s

    DoubleDouble result = prefix;
    result += n_pow * nd / (s - 1.0);
    result -= ldexp(n_pow, -1);

    const auto& bern = full_bernoulli();
    double rising = s;  // q(q+1)...(q+2m-2)
    double n_factor = n_pow.hi / nd;  // n^{-q-2m+1}, m = 1
    for (int m = 1; m <= correction_order; ++m) {
        if (m > 1) {
            rising *= (s + 2.0 * m - 3.0) * (s + 2.0 * m - 2.0);
            n_factor /= nd * nd;
        }
        result += bern[2 * m] / factorial(2 * m) * rising * n_factor;
    }
    return result;
}

DoubleDouble euler_maclaurin_zeta(Exponent q, std::size_t n, int correction_order) {
    if (n < 2) throw ValidationError("Euler-Maclaurin evaluation requires n >= 2");
    return euler_maclaurin_from_prefix(q, n, partial_sum_dd(q, n), correction_order);
}

DoubleDouble reference_zeta(Exponent q, const ReferenceConfig& config) {
    // Memoised: sweeps ask for the same handful of exponents repeatedly.
    static std::mutex mutex;
    static std::map<std::tuple<double, std::size_t, int>, DoubleDouble> cache;
    const auto key = std::make_tuple(q.value(), config.n_ref, config.m_ref);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const DoubleDouble value = euler_maclaurin_zeta(q, config.n_ref, config.m_ref);
    std::lock_guard lock(mutex);
    cache.emplace(key, value);
    return value;
}

}  // namespace dzeta
