#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "epicast/series.hpp"

namespace epicast {

enum class P90Scope { past, full };

std::string to_string(P90Scope s);
P90Scope parse_p90_scope(const std::string& s);

struct TrendStats {
    double growth_rate = 0.0;
    int consecutive_growth = 0;
    bool is_at_peak = false;
    double p90_threshold = 0.0;
    P90Scope p90_scope = P90Scope::past;
    /// Percentile definition used for p90_threshold, kept for audit trails.
    static constexpr const char* percentile_method = "nearest_rank";
};

struct VolatilityBounds {
    double min = 0.05;
    double max = 0.50;
};

/// Series noise level: clamped median absolute relative week-on-week change.
class Volatility {
public:
    /// Clamps `raw` into `bounds`.
    static Volatility clamped(double raw, VolatilityBounds bounds = {});

    double value() const { return value_; }

private:
    explicit Volatility(double v) : value_(v) {}
    double value_;
};

/// (y_t - y_{t-4}) / max(1, y_{t-4}). Throws std::out_of_range when t < 4 or
/// t is past the end of the series.
double growth_rate(const WeeklySeries& series, std::size_t t);

/// Length of the strictly increasing run ending at t.
int consecutive_growth(const WeeklySeries& series, std::size_t t);

/// Nearest-rank 90th percentile: the ceil(0.9 n)-th smallest value.
double p90_nearest_rank(const WeeklySeries& series);

struct PeakStatus {
    bool is_at_peak = false;
    double p90_threshold = 0.0;
};

/// y_t >= P90. With P90Scope::full the percentile spans the whole loaded
/// series (future weeks included); with P90Scope::past only weeks <= t.
PeakStatus peak_status(const WeeklySeries& series, std::size_t t, P90Scope scope = P90Scope::past);

/// Median of |y_s - y_{s-1}| / max(1, y_{s-1}) over the changes inside the
/// `window` observations ending at t, clamped to `bounds`. Throws
/// InsufficientHistory when fewer than two observations are available.
Volatility estimate_volatility(const WeeklySeries& series, std::size_t t, std::size_t window = 8,
                               VolatilityBounds bounds = {});

TrendStats compute_trend(const WeeklySeries& series, std::size_t t, P90Scope scope);

/// Median with the midpoint rule for even counts. Input need not be sorted.
double median(std::vector<double> values);

}  // namespace epicast
