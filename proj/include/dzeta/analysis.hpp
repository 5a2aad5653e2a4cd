#pragma once

// Convergence diagnostics: absolute-error series against a reference value,
// least-squares slopes in log-log space, scaled-error plateaus and a
// saturation filter for errors that reach the binary64 floor.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dzeta/deficiency.hpp"
#include "dzeta/double_double.hpp"
#include "dzeta/error.hpp"

namespace dzeta {

inline constexpr double kDefaultSaturationFloor = 1e-16;
inline constexpr double kDefaultPlateauThreshold = 0.2;

/// Thrown when a fit cannot be performed (too few unsaturated points, window
/// narrower than a decade, fully saturated series).
class AnalysisError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct ErrorPoint {
    std::size_t n = 0;
    double abs_error = 0.0;
    bool saturated = false;
};

struct ErrorSeries {
    std::string label;
    double saturation_floor = kDefaultSaturationFloor;
    std::vector<ErrorPoint> points;

    [[nodiscard]] bool any_saturated() const;
};

struct FitWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/// Geometric grid from n_min to n_max with points_per_decade points per
/// factor of ten, rounded and deduplicated; always contains both ends.
std::vector<std::size_t> geometric_grid(std::size_t n_min, std::size_t n_max, int points_per_decade = 40);

/// Every integer in [n_min, n_max].
std::vector<std::size_t> linear_grid(std::size_t n_min, std::size_t n_max);

using EstimateFn = std::function<DoubleDouble(std::size_t)>;

/// abs_error = |estimate(n) - reference| per grid point; points below the
/// floor are flagged saturated. A throwing estimate aborts with the
/// offending n in the message.
ErrorSeries build_error_series(const std::string& label, const EstimateFn& estimate,
                               std::span<const std::size_t> grid, const DoubleDouble& reference,
                               double saturation_floor = kDefaultSaturationFloor);

ErrorSeries build_error_series(const EstimatorKind& kind, const EstimatorContext& context,
                               std::span<const std::size_t> grid, const DoubleDouble& reference,
                               double saturation_floor = kDefaultSaturationFloor);

/// Last decade of the pre-saturation prefix: [n_hi/10, n_hi], n_hi being the
/// last point before the first saturated one.
FitWindow default_fit_window(const ErrorSeries& series);

/// Least-squares slope of log E against log n over unsaturated points in the
/// window. Needs at least five such points.
double fit_slope(const ErrorSeries& series, FitWindow window);

/// (n, n^exponent * E_n) for every unsaturated point.
std::vector<std::pair<std::size_t, double>> scaled_error(const ErrorSeries& series, double exponent);

struct PlateauStats {
    double constant = 0.0;   // median of the scaled values
    double stability = 0.0;  // (max - min) / median
};

/// Plateau statistics of n^exponent E_n over the unsaturated points in the
/// window; nullopt when the window holds no such points.
std::optional<PlateauStats> plateau(const ErrorSeries& series, double exponent, FitWindow window);

struct RateReport {
    double fitted_slope = 0.0;
    double theoretical_exponent = 0.0;  // -predicted rate
    FitWindow fit_window;
    std::optional<double> plateau_constant;
    double plateau_stability = 0.0;
    bool plateau_declared = false;
    bool saturation_floor_detected = false;
};

struct RateOptions {
    std::optional<FitWindow> window;
    /// Scaling exponent for the plateau; defaults to the theoretical rate.
    std::optional<double> plateau_exponent;
    double plateau_threshold = kDefaultPlateauThreshold;
};

/// Fits, compares against the given rate and runs the plateau test.
RateReport verify_rate(const ErrorSeries& series, double rate, const RateOptions& options = {});

/// Same, with the rate taken from predicted_rate(pair).
RateReport verify_rate(const ErrorSeries& series, const ExponentPair& pair, const RateOptions& options = {});

/// Median of each decade [10^k, 10^{k+1}) of unsaturated and saturated
/// points alike, in increasing n.
std::vector<double> decade_medians(const ErrorSeries& series);

}  // namespace dzeta
