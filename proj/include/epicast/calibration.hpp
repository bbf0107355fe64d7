#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epicast/contracts.hpp"
#include "epicast/trend.hpp"

namespace epicast {

enum class DistributionFamily { neg_binomial, poisson, degenerate };

std::string to_string(DistributionFamily f);
DistributionFamily parse_distribution_family(const std::string& s);

/// Tolerance applied when accumulating the CDF for quantile lookup.
inline constexpr double kCdfSummationTolerance = 1e-12;

/// Count distribution on {0, 1, 2, ...}.
///
/// Negative binomial uses the (n successes, success probability p)
/// parameterization with mean n(1-p)/p, so p = n / (n + mu). n need not be
/// an integer. The degenerate family is a point mass at `mu` (an integer).
class PredictiveDistribution {
public:
    static PredictiveDistribution negative_binomial(double n, double mu);
    static PredictiveDistribution poisson(double mu);
    static PredictiveDistribution point_mass(std::int64_t location);

    DistributionFamily family() const { return family_; }
    double mu() const { return mu_; }
    /// NB dispersion n; 0 for the other families.
    double n_dispersion() const { return n_; }
    /// NB success probability n / (n + mu); 0 for the other families.
    double p_success() const { return p_; }
    double mean() const;
    double variance() const;

    double log_pmf(std::int64_t k) const;
    double pmf(std::int64_t k) const;

    /// pmf(0), pmf(1), ... up to the first k >= mean whose upper tail mass is
    /// below `tail_tolerance`. Built with a log-space ratio recurrence.
    std::vector<double> pmf_table(double tail_tolerance = 1e-14) const;

    std::int64_t q05 = 0;
    std::int64_t q50 = 0;
    std::int64_t q95 = 0;

private:
    PredictiveDistribution(DistributionFamily f, double mu, double n, double p)
        : family_(f), mu_(mu), n_(n), p_(p) {}

    DistributionFamily family_;
    double mu_;
    double n_;
    double p_;
};

struct CalibrationInput {
    double mu = 0.0;          // forecast mean, cases/week, >= 0
    Volatility volatility = Volatility::clamped(0.05);
    double uncertainty = 0.0; // [0, 1]
};

/// (mu * v * (1 + u))^2
double target_variance(const CalibrationInput& in);

/// Moment-matched count distribution with q05/q50/q95 filled in:
/// NB(n = mu^2 / (var - mu)) when var > mu, Poisson(mu) when 0 < var <= mu,
/// point mass at zero when mu = 0. Throws std::invalid_argument on negative
/// or non-finite mu or uncertainty outside [0, 1].
PredictiveDistribution moment_match(const CalibrationInput& in);

/// Smallest k with CDF(k) >= q, accumulating the pmf from k = 0.
/// Throws std::invalid_argument unless 0 < q < 1.
std::int64_t quantile(const PredictiveDistribution& dist, double q);

/// Calibrates horizon step `k` of a raw forecast. Throws std::out_of_range
/// when k is past the forecast length.
PredictiveDistribution calibrate_step(const RawForecast& raw, std::size_t k, Volatility v);

}  // namespace epicast
