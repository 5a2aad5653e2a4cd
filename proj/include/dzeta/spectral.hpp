#pragma once

// Spectral zeta functions zeta_L(s) = sum lambda_k^{-s} over a positive,
// nondecreasing eigenvalue sequence, and the deficiency machinery lifted to
// them. Power-law spectra lambda_k = k^alpha reduce to the classical series
// at exponent alpha*s, which gives a free oracle.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dzeta/double_double.hpp"
#include "dzeta/series_core.hpp"

namespace dzeta {

class SpectrumSource {
public:
    static SpectrumSource power_law(double alpha);
    /// Validates 0 < lambda_1 <= lambda_2 <= ...; all finite.
    static SpectrumSource explicit_values(std::vector<double> eigenvalues);

    [[nodiscard]] bool is_power_law() const { return alpha_.has_value(); }
    /// Growth exponent; only meaningful for power-law sources.
    [[nodiscard]] double alpha() const;
    [[nodiscard]] const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    /// Number of available eigenvalues (unbounded for power laws).
    [[nodiscard]] std::size_t k_max() const;
    [[nodiscard]] double eigenvalue(std::size_t k) const;

    /// lambda_k^{-s}. For power laws this is exactly inverse_power(k, alpha*s).
    [[nodiscard]] DoubleDouble inverse_power_of(std::size_t k, double s) const;

private:
    std::optional<double> alpha_;
    std::vector<double> eigenvalues_;
};

/// Reads the eigenvalue file format: one strictly positive decimal per
/// line, nondecreasing, '#' comment lines and blank lines ignored. Throws
/// DataFormatError naming the offending line.
std::vector<double> parse_spectrum(std::istream& in);
std::vector<double> load_spectrum_file(const std::string& path);

/// Prefix sums of lambda_k^{-s} for k = 1..n_max.
class SpectralTable {
public:
    SpectralTable(const SpectrumSource& source, double s, std::size_t n_max);

    [[nodiscard]] double exponent() const { return exponent_; }
    [[nodiscard]] std::size_t n_max() const { return prefix_.size(); }
    [[nodiscard]] const DoubleDouble& at(std::size_t n) const;

private:
    double exponent_;
    std::vector<DoubleDouble> prefix_;
};

class SpectralPair {
public:
    /// Power laws require p*alpha > 1 and q*alpha > 1; all sources require
    /// q > p > 0.
    SpectralPair(SpectrumSource source, double p, double q);

    [[nodiscard]] const SpectrumSource& source() const { return source_; }
    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] double ratio() const { return q_ / p_; }

    /// zeta_L(s): reference_zeta(alpha*s) for power laws, the full-array sum
    /// for explicit (finite) spectra.
    [[nodiscard]] DoubleDouble reference(double s, const ReferenceConfig& config = {}) const;

private:
    SpectrumSource source_;
    double p_;
    double q_;
};

DoubleDouble spectral_partial_sum(const SpectrumSource& source, double s, std::size_t n);

/// (S_n^{(p)})^{q/p} - sum_{k<=n} lambda_k^{-q}.
DoubleDouble spectral_deficiency(const SpectralPair& pair, std::size_t n);

/// zeta_L(p)^{q/p} - D_n - (q/p) zeta_L(p)^{q/p-1} (zeta_L(p) - S_n), with
/// the caller-supplied zeta_L(p).
DoubleDouble spectral_estimator(const SpectralPair& pair, std::size_t n, const DoubleDouble& zeta_p);

/// (alpha q + 1)/(2 alpha). Requires alpha > 0 and alpha*q > 1.
double spectral_threshold(double alpha, double q);

/// Sweep-friendly view of one spectral pair: prefix tables and the
/// incremental deficiency series built once, estimates read per n.
class SpectralContext {
public:
    SpectralContext(const SpectralPair& pair, std::size_t n_max, const ReferenceConfig& reference = {});

    [[nodiscard]] const SpectralPair& pair() const { return pair_; }
    [[nodiscard]] std::size_t n_max() const { return target_.n_max(); }
    [[nodiscard]] const DoubleDouble& base_zeta() const { return base_zeta_; }
    [[nodiscard]] const DoubleDouble& target_zeta() const { return target_zeta_; }

    [[nodiscard]] const DoubleDouble& truncation(std::size_t n) const { return target_.at(n); }
    [[nodiscard]] const DoubleDouble& deficiency(std::size_t n) const;
    [[nodiscard]] DoubleDouble estimate_a(std::size_t n) const;
    [[nodiscard]] DoubleDouble estimate_b(std::size_t n) const;
    [[nodiscard]] DoubleDouble estimate_b2(std::size_t n) const;

private:
    SpectralPair pair_;
    SpectralTable base_;
    SpectralTable target_;
    std::vector<DoubleDouble> deficiency_;
    DoubleDouble base_zeta_;
    DoubleDouble target_zeta_;
};

}  // namespace dzeta
