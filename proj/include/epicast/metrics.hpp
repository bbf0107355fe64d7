#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epicast/calibration.hpp"
#include "epicast/date.hpp"

namespace epicast {

enum class RecordStatus { ok, invalid_origin };

std::string to_string(RecordStatus s);

/// One scored forecast. For invalid origins only origin_date, horizon_step,
/// y_true and status are meaningful.
struct ForecastRecord {
    Date origin_date;
    int horizon_step = 1;
    std::int64_t y_true = 0;
    double mu = 0.0;  // raw forecaster mean
    std::int64_t q05 = 0;
    std::int64_t q50 = 0;
    std::int64_t q95 = 0;
    DistributionFamily family = DistributionFamily::degenerate;
    double n_dispersion = 0.0;
    double p_success = 0.0;
    double crps = 0.0;
    double impact = 0.0;
    double confidence = 0.0;
    double uncertainty = 0.0;
    double volatility = 0.0;
    RecordStatus status = RecordStatus::ok;
    int interpreter_attempts = 0;
    int forecaster_attempts = 0;

    bool ok() const { return status == RecordStatus::ok; }
    /// Rebuilds the calibrated distribution from the stored parameters.
    PredictiveDistribution distribution() const;
};

struct MetricsSummary {
    double mae = 0.0;
    double rmse = 0.0;
    double crps = 0.0;
    double coverage90 = 0.0;
    /// MAE of the raw forecaster mean, for comparison with the q50 MAE.
    double mae_raw_mean = 0.0;
    int n_origins = 0;
    int n_excluded = 0;
};

/// Lattice CRPS: sum over k >= 0 of (F(k) - 1{k >= y})^2, continued until the
/// remaining upper tail mass is below 1e-10 and k >= y.
double crps(const PredictiveDistribution& dist, std::int64_t y);

/// The following score the ok records only, using q50 as the point forecast.
/// They throw ValidationError when no ok record is present.
double mae(const std::vector<ForecastRecord>& records);
double rmse(const std::vector<ForecastRecord>& records);
double mean_crps(const std::vector<ForecastRecord>& records);
/// Share of ok records with q05 <= y_true <= q95.
double coverage90(const std::vector<ForecastRecord>& records);
double mae_raw_mean(const std::vector<ForecastRecord>& records);

MetricsSummary summarize(const std::vector<ForecastRecord>& records);

}  // namespace epicast
