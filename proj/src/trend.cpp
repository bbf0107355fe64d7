#include "epicast/trend.hpp"

#include <algorithm>
#include <cmath>

#include "epicast/error.hpp"

namespace epicast {

std::string to_string(P90Scope s) { return s == P90Scope::full ? "full" : "past"; }

P90Scope parse_p90_scope(const std::string& s) {
    if (s == "full") return P90Scope::full;
    if (s == "past") return P90Scope::past;
    throw ValidationError("p90 scope must be 'full' or 'past', got '" + s + "'");
}

Volatility Volatility::clamped(double raw, VolatilityBounds bounds) {
    if (!(bounds.min <= bounds.max)) throw ValidationError("volatility bounds out of order");
    if (std::isnan(raw)) raw = bounds.min;
    return Volatility(std::clamp(raw, bounds.min, bounds.max));
}

double growth_rate(const WeeklySeries& series, std::size_t t) {
    if (t < 4) throw std::out_of_range("growth_rate needs four prior weeks (t >= 4)");
    const double now = static_cast<double>(series.at(t).count);
    const double before = static_cast<double>(series.at(t - 4).count);
    return (now - before) / std::max(1.0, before);
}

int consecutive_growth(const WeeklySeries& series, std::size_t t) {
    series.at(t);
    int k = 0;
    while (t >= static_cast<std::size_t>(k) + 1 &&
           series[t - k].count > series[t - k - 1].count) {
        ++k;
    }
    return k;
}

double p90_nearest_rank(const WeeklySeries& series) {
    if (series.empty()) throw InsufficientHistory("percentile of an empty series");
    std::vector<std::int64_t> v;
    v.reserve(series.size());
    for (const auto& e : series.entries()) v.push_back(e.count);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const std::size_t rank = (9 * n + 9) / 10;  // ceil(0.9 n) in integers
    return static_cast<double>(v[std::max<std::size_t>(rank, 1) - 1]);
}

PeakStatus peak_status(const WeeklySeries& series, std::size_t t, P90Scope scope) {
    const double current = static_cast<double>(series.at(t).count);
    const double threshold =
        p90_nearest_rank(scope == P90Scope::full ? series : series.prefix(t + 1));
    return {current >= threshold, threshold};
}

double median(std::vector<double> values) {
    if (values.empty()) throw InsufficientHistory("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Volatility estimate_volatility(const WeeklySeries& series, std::size_t t, std::size_t window,
                               VolatilityBounds bounds) {
    series.at(t);
    const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
    if (window < 2 || t < first + 1) {
        throw InsufficientHistory("volatility needs at least two observations in the window ending " +
                                  series[t].week_start.iso());
    }
    std::vector<double> changes;
    changes.reserve(t - first);
    for (std::size_t s = first + 1; s <= t; ++s) {
        const double prev = static_cast<double>(series[s - 1].count);
        const double cur = static_cast<double>(series[s].count);
        changes.push_back(std::abs(cur - prev) / std::max(1.0, prev));
    }
    return Volatility::clamped(median(std::move(changes)), bounds);
}

TrendStats compute_trend(const WeeklySeries& series, std::size_t t, P90Scope scope) {
    TrendStats s;
    s.growth_rate = growth_rate(series, t);
    s.consecutive_growth = consecutive_growth(series, t);
    const auto peak = peak_status(series, t, scope);
    s.is_at_peak = peak.is_at_peak;
    s.p90_threshold = peak.p90_threshold;
    s.p90_scope = scope;
    return s;
}

}  // namespace epicast
