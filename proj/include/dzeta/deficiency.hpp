#pragma once

// The deficiency functional D_n = (S_n^(p))^{q/p} - T_n^(q), the exact
// identity zeta(q) = zeta(p)^{q/p} - D_inf, and the estimator family built
// on it. Rate theory helpers (predicted exponent, balancing threshold,
// recommended base) live here too.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dzeta/double_double.hpp"
#include "dzeta/series_core.hpp"

namespace dzeta {

/// Base exponent p and target exponent q with q > p > 1.
class ExponentPair {
public:
    ExponentPair(double p, double q);

    [[nodiscard]] Exponent base() const { return p_; }
    [[nodiscard]] Exponent target() const { return q_; }
    [[nodiscard]] double p() const { return p_.value(); }
    [[nodiscard]] double q() const { return q_.value(); }
    /// q/p, the power applied to the base series.
    [[nodiscard]] double ratio() const { return q_.value() / p_.value(); }

private:
    Exponent p_;
    Exponent q_;
};

/// D_1..D_{n_max} for one pair, accumulated increment by increment.
class DeficiencySeries {
public:
    DeficiencySeries(ExponentPair pair, std::vector<DoubleDouble> values,
                     std::vector<DoubleDouble> increments);

    [[nodiscard]] const ExponentPair& pair() const { return pair_; }
    [[nodiscard]] std::size_t n_max() const { return values_.size(); }
    [[nodiscard]] const DoubleDouble& at(std::size_t n) const;
    /// D_n - D_{n-1} for n >= 2; increment(1) is D_1 = 0.
    [[nodiscard]] const DoubleDouble& increment(std::size_t n) const;
    [[nodiscard]] std::span<const DoubleDouble> values() const { return values_; }

private:
    ExponentPair pair_;
    std::vector<DoubleDouble> values_;
    std::vector<DoubleDouble> increments_;
};

/// (S_n)^{q/p} - T_n straight from the definition.
DoubleDouble deficiency_direct(const ExponentPair& pair, const SeriesTable& base_table,
                               const SeriesTable& target_table, std::size_t n);

/// D_n = sum_{k=2}^{n} [(S_k)^{q/p} - (S_{k-1})^{q/p} - k^{-q}].
DeficiencySeries deficiency_incremental(const ExponentPair& pair, const SeriesTable& base_table,
                                        std::size_t n_max);

struct Truncation {};
struct DeficiencyA {};
struct DeficiencyB {};
struct DeficiencyB2 {};
struct EulerMaclaurin {
    int correction_order = 2;
};

using EstimatorKind = std::variant<Truncation, DeficiencyA, DeficiencyB, DeficiencyB2, EulerMaclaurin>;

/// Parses "trunc", "a", "b", "b2" or "em:<M>".
EstimatorKind parse_estimator(const std::string& token);
std::string estimator_name(const EstimatorKind& kind);
bool needs_base(const EstimatorKind& kind);
/// Smallest n at which the estimator is defined.
std::size_t min_n(const EstimatorKind& kind);

/// Tables and reference values shared by every estimate over n <= n_max.
/// The base-side data is only present when a base exponent was given.
class EstimatorContext {
public:
    EstimatorContext(Exponent target, std::optional<Exponent> base, std::size_t n_max,
                     const ReferenceConfig& reference = {});
    EstimatorContext(const ExponentPair& pair, std::size_t n_max,
                     const ReferenceConfig& reference = {});

    [[nodiscard]] Exponent target() const { return target_table_.exponent(); }
    [[nodiscard]] std::size_t n_max() const { return target_table_.n_max(); }
    [[nodiscard]] bool has_base() const { return pair_.has_value(); }
    /// Throws ValidationError when no base exponent was supplied.
    [[nodiscard]] const ExponentPair& pair() const;
    [[nodiscard]] const SeriesTable& base_table() const;
    [[nodiscard]] const SeriesTable& target_table() const { return target_table_; }
    [[nodiscard]] const DeficiencySeries& deficiency() const;
    /// zeta(p) from the reference oracle.
    [[nodiscard]] const DoubleDouble& base_zeta() const;

private:
    std::optional<ExponentPair> pair_;
    SeriesTable target_table_;
    std::optional<SeriesTable> base_table_;
    std::optional<DeficiencySeries> deficiency_;
    DoubleDouble base_zeta_;
};

/// Estimate of zeta(q) at n:
///   Truncation     T_n
///   DeficiencyA    zeta(p)^{q/p} - D_n
///   DeficiencyB    A_n - (q/p) zeta(p)^{q/p-1} t_n
///   DeficiencyB2   B_n + q(q-p)/(2p^2) zeta(p)^{q/p-2} t_n^2
///   EulerMaclaurin Euler-Maclaurin with M corrections
/// where t_n = zeta(p) - S_n.
DoubleDouble estimate(const EstimatorKind& kind, const EstimatorContext& context, std::size_t n);

/// T_n + [zeta(p)^{q/p} - (S_n)^{q/p}]; an independent route to A_n used as
/// a consistency check.
DoubleDouble algebraic_form_a(const EstimatorContext& context, std::size_t n);

/// min(2p - 2, q - 1).
double predicted_rate(const ExponentPair& pair);

/// Asymptotic error exponent of an estimator: q-1 for truncation, p-1 for
/// A (first-order bias), min(2p-2, q-1) for B, min(3p-3, q-1) for B2 (an
/// empirical extrapolation of the hierarchy) and q+2M+1 for Euler-Maclaurin.
double estimator_rate(const EstimatorKind& kind, double q, std::optional<double> p);

/// (q + 1)/2, the smallest base exponent reaching rate q - 1. Requires q > 2.
double balancing_threshold(double q);

/// Whether p lies in the optimal region p >= (q+1)/2 (false for q <= 2).
bool in_optimal_region(const ExponentPair& pair);

namespace detail {

// Shared by the classical and spectral paths so that a power-law spectrum
// with alpha = 1 reproduces the classical numbers bit for bit.

/// Runs the incremental recurrence over a base prefix array; target_term(k)
/// supplies the k-th target term. Fills values and increments (both 1-based
/// as index n-1).
template <class TargetTerm>
void accumulate_deficiency(std::span<const DoubleDouble> base_prefix, double ratio,
                           TargetTerm&& target_term, std::vector<DoubleDouble>& values,
                           std::vector<DoubleDouble>& increments) {
    values.clear();
    increments.clear();
    values.reserve(base_prefix.size());
    increments.reserve(base_prefix.size());
    if (base_prefix.empty()) return;
    values.emplace_back(0.0);
    increments.emplace_back(0.0);
    DoubleDouble previous_power = pow(base_prefix[0], ratio);
    DoubleDouble running;
    for (std::size_t k = 2; k <= base_prefix.size(); ++k) {
        const DoubleDouble power = pow(base_prefix[k - 1], ratio);
        const DoubleDouble incr = (power - previous_power) - target_term(k);
        running += incr;
        increments.push_back(incr);
        values.push_back(running);
        previous_power = power;
    }
}

/// order 0 -> A_n, 1 -> B_n, 2 -> B2_n.
DoubleDouble corrected_estimate(int order, const DoubleDouble& zeta_p, double ratio,
                                const DoubleDouble& deficiency, const DoubleDouble& base_prefix);

}  // namespace detail

enum class BaseStrategy { Universal, ExplicitEven };

/// Universal -> 2; ExplicitEven -> q - 1 for odd integer q >= 3.
Exponent recommended_base(double q, BaseStrategy strategy);

}  // namespace dzeta
