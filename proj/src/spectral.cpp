#include "dzeta/spectral.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "dzeta/deficiency.hpp"
#include "dzeta/error.hpp"

namespace dzeta {

namespace {

std::string fmt(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

SpectrumSource SpectrumSource::power_law(double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0)) {
        throw ValidationError("power-law spectrum requires alpha > 0 (got alpha=" + fmt(alpha) + ")");
    }
    SpectrumSource source;
    source.alpha_ = alpha;
    return source;
}

SpectrumSource SpectrumSource::explicit_values(std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) throw ValidationError("explicit spectrum is empty");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double v = eigenvalues[i];
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw ValidationError("eigenvalue " + std::to_string(i + 1) + " is not a finite positive number");
        }
        if (i > 0 && v < eigenvalues[i - 1]) {
            throw ValidationError("eigenvalues decrease at index " + std::to_string(i + 1));
        }
    }
    SpectrumSource source;
    source.eigenvalues_ = std::move(eigenvalues);
    return source;
}

double SpectrumSource::alpha() const {
    if (!alpha_) throw ValidationError("explicit spectrum has no growth exponent");
    return *alpha_;
}

std::size_t SpectrumSource::k_max() const {
    return alpha_ ? std::numeric_limits<std::size_t>::max() : eigenvalues_.size();
}

double SpectrumSource::eigenvalue(std::size_t k) const {
    if (k == 0 || k > k_max()) {
        throw ValidationError("n=" + std::to_string(k) + " beyond available spectrum (k_max=" +
                              std::to_string(eigenvalues_.size()) + ")");
    }
    if (alpha_) return std::pow(static_cast<double>(k), *alpha_);
    return eigenvalues_[k - 1];
}

DoubleDouble SpectrumSource::inverse_power_of(std::size_t k, double s) const {
    if (alpha_) {
        if (k == 0) throw ValidationError("eigenvalue index must be >= 1");
        return inverse_power(static_cast<double>(k), *alpha_ * s);
    }
    return inverse_power(eigenvalue(k), s);
}

std::vector<double> parse_spectrum(std::istream& in) {
    std::vector<double> values;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        double v = 0.0;
        const char* first = line.data();
        const char* last = line.data() + line.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw DataFormatError(line_no, "not a decimal number: '" + std::string(line) + "'");
        }
        if (!std::isfinite(v)) throw DataFormatError(line_no, "eigenvalue is not finite");
        if (!(v > 0.0)) throw DataFormatError(line_no, "eigenvalue must be strictly positive");
        if (!values.empty() && v < values.back()) {
            throw DataFormatError(line_no, "eigenvalues must be nondecreasing");
        }
        values.push_back(v);
    }
    if (values.empty()) throw DataFormatError(line_no, "spectrum file contains no eigenvalues");
    return values;
}

std::vector<double> load_spectrum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spectrum file '" + path + "'");
    return parse_spectrum(in);
}

SpectralTable::SpectralTable(const SpectrumSource& source, double s, std::size_t n_max)
    : exponent_(s) {
    if (n_max == 0) throw ValidationError("spectral table requires n_max >= 1");
    if (n_max > source.k_max()) {
        throw ValidationError("n=" + std::to_string(n_max) + " beyond available spectrum (k_max=" +
                              std::to_string(source.k_max()) + ")");
    }
    prefix_.reserve(n_max);
    DoubleDouble sum;
    for (std::size_t k = 1; k <= n_max; ++k) {
        sum += source.inverse_power_of(k, s);
        prefix_.push_back(sum);
    }
}

const DoubleDouble& SpectralTable::at(std::size_t n) const {
    if (n == 0 || n > prefix_.size()) {
        throw ValidationError("n=" + std::to_string(n) + " outside spectral table range [1, " +
                              std::to_string(prefix_.size()) + "]");
    }
    return prefix_[n - 1];
}

SpectralPair::SpectralPair(SpectrumSource source, double p, double q)
    : source_(std::move(source)), p_(p), q_(q) {
    ExponentPair{p, q};  // q > p > 1
    if (source_.is_power_law()) {
        const double alpha = source_.alpha();
        if (!(p * alpha > 1.0) || !(q * alpha > 1.0)) {
            throw ValidationError("divergent configuration: power-law spectrum requires p*alpha > 1 and "
                                  "q*alpha > 1 (got p=" + fmt(p) + ", q=" + fmt(q) + ", alpha=" +
                                  fmt(alpha) + ")");
        }
    }
}

DoubleDouble SpectralPair::reference(double s, const ReferenceConfig& config) const {
    if (source_.is_power_law()) return reference_zeta(Exponent(source_.alpha() * s), config);
    return spectral_partial_sum(source_, s, source_.k_max());
}

DoubleDouble spectral_partial_sum(const SpectrumSource& source, double s, std::size_t n) {
    if (!(s > 0.0)) throw ValidationError("spectral exponent must be > 0");
    if (n == 0) throw ValidationError("spectral partial sum requires n >= 1");
    if (n > source.k_max()) {
        throw ValidationError("n=" + std::to_string(n) + " beyond available spectrum (k_max=" +
                              std::to_string(source.k_max()) + ")");
    }
    DoubleDouble sum;
    for (std::size_t k = 1; k <= n; ++k) sum += source.inverse_power_of(k, s);
    return sum;
}

DoubleDouble spectral_deficiency(const SpectralPair& pair, std::size_t n) {
    const DoubleDouble s_n = spectral_partial_sum(pair.source(), pair.p(), n);
    const DoubleDouble t_n = spectral_partial_sum(pair.source(), pair.q(), n);
    return pow(s_n, pair.ratio()) - t_n;
}

DoubleDouble spectral_estimator(const SpectralPair& pair, std::size_t n, const DoubleDouble& zeta_p) {
    if (!zeta_p.is_finite() || !(zeta_p.hi > 0.0)) {
        throw ValidationError("spectral estimator needs a finite positive zeta_L(p) reference");
    }
    const DoubleDouble s_n = spectral_partial_sum(pair.source(), pair.p(), n);
    return detail::corrected_estimate(1, zeta_p, pair.ratio(), spectral_deficiency(pair, n), s_n);
}

double spectral_threshold(double alpha, double q) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !std::isfinite(q) || !(alpha * q > 1.0)) {
        throw ValidationError("divergent configuration: spectral threshold requires alpha > 0 and "
                              "alpha*q > 1 (got alpha=" + fmt(alpha) + ", q=" + fmt(q) + ")");
    }
    return (alpha * q + 1.0) / (2.0 * alpha);
}

SpectralContext::SpectralContext(const SpectralPair& pair, std::size_t n_max,
                                 const ReferenceConfig& reference)
    : pair_(pair),
      base_(pair.source(), pair.p(), n_max),
      target_(pair.source(), pair.q(), n_max),
      base_zeta_(pair.reference(pair.p(), reference)),
      target_zeta_(pair.reference(pair.q(), reference)) {
    std::vector<DoubleDouble> base_prefix;
    base_prefix.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) base_prefix.push_back(base_.at(n));
    std::vector<DoubleDouble> increments;
    const SpectrumSource& source = pair_.source();
    const double q = pair_.q();
    detail::accumulate_deficiency(
        base_prefix, pair_.ratio(), [&source, q](std::size_t k) { return source.inverse_power_of(k, q); },
        deficiency_, increments);
}

const DoubleDouble& SpectralContext::deficiency(std::size_t n) const {
    if (n == 0 || n > deficiency_.size()) {
        throw ValidationError("n=" + std::to_string(n) + " outside spectral range [1, " +
                              std::to_string(deficiency_.size()) + "]");
    }
    return deficiency_[n - 1];
}

DoubleDouble SpectralContext::estimate_a(std::size_t n) const {
    return detail::corrected_estimate(0, base_zeta_, pair_.ratio(), deficiency(n), base_.at(n));
}

DoubleDouble SpectralContext::estimate_b(std::size_t n) const {
    return detail::corrected_estimate(1, base_zeta_, pair_.ratio(), deficiency(n), base_.at(n));
}

DoubleDouble SpectralContext::estimate_b2(std::size_t n) const {
    return detail::corrected_estimate(2, base_zeta_, pair_.ratio(), deficiency(n), base_.at(n));
}

}  // namespace dzeta
