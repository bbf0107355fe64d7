#include "epicast/metrics.hpp"

#include <cmath>

#include "epicast/error.hpp"

namespace epicast {

namespace {

constexpr double kCrpsTailTolerance = 1e-10;

template <typename F>
double mean_over_ok(const std::vector<ForecastRecord>& records, F&& f) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : records) {
        if (!r.ok()) continue;
        sum += f(r);
        ++n;
    }
    if (n == 0) throw ValidationError("no valid forecast records to score");
    return sum / n;
}

}  // namespace

std::string to_string(RecordStatus s) { return s == RecordStatus::ok ? "ok" : "invalid_origin"; }

PredictiveDistribution ForecastRecord::distribution() const {
    PredictiveDistribution d = [&] {
        switch (family) {
            case DistributionFamily::neg_binomial: return PredictiveDistribution::negative_binomial(n_dispersion, mu);
            case DistributionFamily::poisson: return PredictiveDistribution::poisson(mu);
            case DistributionFamily::degenerate: break;
        }
        return PredictiveDistribution::point_mass(static_cast<std::int64_t>(std::llround(mu)));
    }();
    d.q05 = q05;
    d.q50 = q50;
    d.q95 = q95;
    return d;
}

double crps(const PredictiveDistribution& dist, std::int64_t y) {
    if (y < 0) throw std::invalid_argument("truth must be a non-negative count");
    const auto table = dist.pmf_table(kCrpsTailTolerance);
    double sum = 0.0;
    double cdf = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k) {
        cdf += table[k];
        const double step = static_cast<std::int64_t>(k) >= y ? 1.0 : 0.0;
        sum += (cdf - step) * (cdf - step);
    }
    // Past the table F(k) is ~1; below y the indicator is still 0.
    for (auto k = static_cast<std::int64_t>(table.size()); k < y; ++k) sum += cdf * cdf;
    return sum;
}

double mae(const std::vector<ForecastRecord>& records) {
    return mean_over_ok(records, [](const ForecastRecord& r) {
        return std::abs(static_cast<double>(r.y_true - r.q50));
    });
}

double rmse(const std::vector<ForecastRecord>& records) {
    return std::sqrt(mean_over_ok(records, [](const ForecastRecord& r) {
        const double e = static_cast<double>(r.y_true - r.q50);
        return e * e;
    }));
}

double mean_crps(const std::vector<ForecastRecord>& records) {
    return mean_over_ok(records, [](const ForecastRecord& r) { return r.crps; });
}

double coverage90(const std::vector<ForecastRecord>& records) {
    return mean_over_ok(records, [](const ForecastRecord& r) {
        return r.q05 <= r.y_true && r.y_true <= r.q95 ? 1.0 : 0.0;
    });
}

double mae_raw_mean(const std::vector<ForecastRecord>& records) {
    return mean_over_ok(records, [](const ForecastRecord& r) {
        return std::abs(static_cast<double>(r.y_true) - r.mu);
    });
}

MetricsSummary summarize(const std::vector<ForecastRecord>& records) {
    MetricsSummary s;
    for (const auto& r : records) (r.ok() ? s.n_origins : s.n_excluded)++;
    if (s.n_origins == 0) return s;
    s.mae = mae(records);
    s.rmse = rmse(records);
    s.crps = mean_crps(records);
    s.coverage90 = coverage90(records);
    s.mae_raw_mean = mae_raw_mean(records);
    return s;
}

}  // namespace epicast
