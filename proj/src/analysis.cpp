#include "dzeta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dzeta/error.hpp"

namespace dzeta {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

bool ErrorSeries::any_saturated() const {
    return std::any_of(points.begin(), points.end(), [](const ErrorPoint& p) { return p.saturated; });
}

std::vector<std::size_t> geometric_grid(std::size_t n_min, std::size_t n_max, int points_per_decade) {
    if (n_min == 0 || n_max < n_min) throw ValidationError("grid requires 1 <= n_min <= n_max");
    if (points_per_decade < 1) throw ValidationError("grid requires at least one point per decade");
    std::vector<std::size_t> grid{n_min};
    const double lo = std::log10(static_cast<double>(n_min));
    const double hi = std::log10(static_cast<double>(n_max));
    const auto steps = static_cast<long>(std::ceil((hi - lo) * points_per_decade));
    for (long i = 1; i <= steps; ++i) {
        const double x = lo + static_cast<double>(i) / points_per_decade;
        auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, x)));
        n = std::min(n, n_max);
        if (n > grid.back()) grid.push_back(n);
    }
    if (grid.back() != n_max) grid.push_back(n_max);
    return grid;
}

std::vector<std::size_t> linear_grid(std::size_t n_min, std::size_t n_max) {
    if (n_min == 0 || n_max < n_min) throw ValidationError("grid requires 1 <= n_min <= n_max");
    std::vector<std::size_t> grid;
    grid.reserve(n_max - n_min + 1);
    for (std::size_t n = n_min; n <= n_max; ++n) grid.push_back(n);
    return grid;
}

ErrorSeries build_error_series(const std::string& label, const EstimateFn& estimate,
                               std::span<const std::size_t> grid, const DoubleDouble& reference,
                               double saturation_floor) {
    if (grid.empty()) throw ValidationError("error series needs a nonempty grid");
    if (!reference.is_finite()) throw ValidationError("error series needs a finite reference");
    ErrorSeries series{label, saturation_floor, {}};
    series.points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t n = grid[i];
        if (i > 0 && n <= grid[i - 1]) throw ValidationError("grid must be strictly increasing");
        DoubleDouble value;
        try {
            value = estimate(n);
        } catch (const Error& e) {
            throw ValidationError(label + ": estimator failed at n=" + std::to_string(n) + ": " + e.what());
        }
        if (!value.is_finite()) {
            throw ValidationError(label + ": estimator failed at n=" + std::to_string(n) + ": non-finite value");
        }
        const double err = abs(value - reference).hi;
        series.points.push_back({n, err, err < saturation_floor});
    }
    return series;
}

ErrorSeries build_error_series(const EstimatorKind& kind, const EstimatorContext& context,
                               std::span<const std::size_t> grid, const DoubleDouble& reference,
                               double saturation_floor) {
    return build_error_series(
        estimator_name(kind), [&](std::size_t n) { return estimate(kind, context, n); }, grid, reference,
        saturation_floor);
}

FitWindow default_fit_window(const ErrorSeries& series) {
    std::size_t last = 0;
    bool found = false;
    for (const auto& p : series.points) {
        if (p.saturated) break;
        last = p.n;
        found = true;
    }
    if (!found) throw AnalysisError(series.label + ": series is entirely saturated; no slope available");
    return {std::max<std::size_t>(1, last / 10), last};
}

double fit_slope(const ErrorSeries& series, FitWindow window) {
    if (window.lo == 0 || window.hi < window.lo) throw AnalysisError("invalid fit window");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : series.points) {
        if (p.n < window.lo || p.n > window.hi || p.saturated || !(p.abs_error > 0.0)) continue;
        xs.push_back(std::log(static_cast<double>(p.n)));
        ys.push_back(std::log(p.abs_error));
    }
    if (xs.size() < 5) {
        throw AnalysisError(series.label + ": fit window [" + std::to_string(window.lo) + ", " +
                            std::to_string(window.hi) + "] has " + std::to_string(xs.size()) +
                            " unsaturated points; need at least 5");
    }
    const double count = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

std::vector<std::pair<std::size_t, double>> scaled_error(const ErrorSeries& series, double exponent) {
    if (!(exponent > 0.0)) throw ValidationError("scaling exponent must be > 0");
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& p : series.points) {
        if (p.saturated) continue;
        out.emplace_back(p.n, std::pow(static_cast<double>(p.n), exponent) * p.abs_error);
    }
    return out;
}

std::optional<PlateauStats> plateau(const ErrorSeries& series, double exponent, FitWindow window) {
    std::vector<double> values;
    for (const auto& [n, v] : scaled_error(series, exponent)) {
        if (n >= window.lo && n <= window.hi) values.push_back(v);
    }
    if (values.empty()) return std::nullopt;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double hi = *mx;
    const double med = median(std::move(values));
    return PlateauStats{med, med > 0.0 ? (hi - lo) / med : std::numeric_limits<double>::infinity()};
}

RateReport verify_rate(const ErrorSeries& series, double rate, const RateOptions& options) {
    RateReport report;
    report.fit_window = options.window ? *options.window : default_fit_window(series);
    if (report.fit_window.hi < 10 * report.fit_window.lo) {
        throw AnalysisError(series.label + ": fit window must span at least one decade");
    }
    report.fitted_slope = fit_slope(series, report.fit_window);
    report.theoretical_exponent = -rate;
    report.saturation_floor_detected = series.any_saturated();
    if (const auto stats = plateau(series, options.plateau_exponent.value_or(rate), report.fit_window)) {
        report.plateau_constant = stats->constant;
        report.plateau_stability = stats->stability;
        report.plateau_declared = stats->stability <= options.plateau_threshold;
    }
    return report;
}

RateReport verify_rate(const ErrorSeries& series, const ExponentPair& pair, const RateOptions& options) {
    return verify_rate(series, predicted_rate(pair), options);
}

std::vector<double> decade_medians(const ErrorSeries& series) {
    std::vector<double> medians;
    std::vector<double> bucket;
    std::size_t decade_end = 10;
    for (const auto& p : series.points) {
        while (p.n >= decade_end) {
            if (!bucket.empty()) medians.push_back(median(std::move(bucket)));
            bucket.clear();
            decade_end *= 10;
        }
        bucket.push_back(p.abs_error);
    }
    if (!bucket.empty()) medians.push_back(median(std::move(bucket)));
    return medians;
}

}  // namespace dzeta
