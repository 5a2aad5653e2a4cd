#pragma once

// Classical series quantities: partial sums of k^-s, tail bounds, Bernoulli
// numbers, closed-form even zeta values and the Euler-Maclaurin evaluator
// that doubles as the ground-truth zeta oracle.

#include <cstddef>
#include <span>
#include <vector>

#include "dzeta/double_double.hpp"

namespace dzeta {

/// A series exponent s > 1, so that sum k^-s converges.
class Exponent {
public:
    explicit Exponent(double value);

    [[nodiscard]] double value() const { return value_; }
    [[nodiscard]] bool is_integer() const;

    friend bool operator==(Exponent, Exponent) = default;

private:
    double value_;
};

/// k^-s to double-double precision. Integer exponents take an exact-power
/// fast path; everything else goes through exp(-s log k). Requires k >= 1,
/// s > 0.
DoubleDouble inverse_power(double k, double s);

/// S_n = sum_{k=1}^n k^-s, summed in ascending k.
double partial_sum(Exponent exponent, std::size_t n);
DoubleDouble partial_sum_dd(Exponent exponent, std::size_t n);

struct TableLimits {
    std::size_t max_entries = 50'000'000;
};

/// Prefix sums S_1..S_{n_max} for one exponent. Built in a single sequential
/// pass, so the contents are bit-identical for identical inputs.
class SeriesTable {
public:
    SeriesTable(Exponent exponent, std::size_t n_max, TableLimits limits = {});

    [[nodiscard]] Exponent exponent() const { return exponent_; }
    [[nodiscard]] std::size_t n_max() const { return prefix_.size(); }

    /// S_n rounded to binary64 (1-based).
    [[nodiscard]] double prefix(std::size_t n) const { return at(n).hi; }
    /// S_n with its accumulated rounding compensation.
    [[nodiscard]] const DoubleDouble& at(std::size_t n) const;

    [[nodiscard]] std::span<const DoubleDouble> values() const { return prefix_; }

private:
    Exponent exponent_;
    std::vector<DoubleDouble> prefix_;
};

SeriesTable build_table(Exponent exponent, std::size_t n_max, TableLimits limits = {});

/// Leading term 1/((s-1) n^(s-1)) of the tail sum_{k>n} k^-s.
double tail_leading(Exponent exponent, std::size_t n);

inline constexpr int kBernoulliCap = 40;

/// Bernoulli numbers B_0..B_max (B_1 = -1/2 convention), computed exactly
/// by the defining recurrence and rounded once to binary64.
class BernoulliCache {
public:
    explicit BernoulliCache(int max_index);

    [[nodiscard]] int max_index() const { return static_cast<int>(values_.size()) - 1; }
    [[nodiscard]] double operator[](int index) const;
    [[nodiscard]] std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
};

BernoulliCache bernoulli(int max_index);

/// zeta(2m) from Euler's closed form (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!).
double even_zeta_closed_form(int m);

/// Euler-Maclaurin approximation of zeta(q) with n explicit terms and M
/// Bernoulli corrections:
///   S_n + n^{1-q}/(q-1) - n^{-q}/2
///       + sum_{m=1}^{M} B_{2m}/(2m)! * q(q+1)...(q+2m-2) * n^{-q-2m+1}
DoubleDouble euler_maclaurin_zeta(Exponent q, std::size_t n, int correction_order);

/// Same expansion with a precomputed S_n, so sweeps can reuse a table.
DoubleDouble euler_maclaurin_from_prefix(Exponent q, std::size_t n, const DoubleDouble& prefix,
                                         int correction_order);

struct ReferenceConfig {
    std::size_t n_ref = 10'000;
    int m_ref = 6;
};

/// Ground-truth zeta(q): euler_maclaurin_zeta(q, n_ref, m_ref).
DoubleDouble reference_zeta(Exponent q, const ReferenceConfig& config = {});

}  // namespace dzeta
