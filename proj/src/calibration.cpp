#include "epicast/calibration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "epicast/error.hpp"

namespace epicast {

namespace {

double log_gamma(double x) {
#ifdef __GLIBC__
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// Upper limit for forward accumulation; far beyond any mass of interest.
std::int64_t scan_limit(double mean, double variance) {
    const double sd = std::sqrt(std::max(variance, 0.0));
    return static_cast<std::int64_t>(mean + 60.0 * sd + 1000.0);
}

}  // namespace

std::string to_string(DistributionFamily f) {
    switch (f) {
        case DistributionFamily::neg_binomial: return "neg_binomial";
        case DistributionFamily::poisson: return "poisson";
        case DistributionFamily::degenerate: return "degenerate";
    }
    return "degenerate";
}

DistributionFamily parse_distribution_family(const std::string& s) {
    if (s == "neg_binomial") return DistributionFamily::neg_binomial;
    if (s == "poisson") return DistributionFamily::poisson;
    if (s == "degenerate") return DistributionFamily::degenerate;
    throw ValidationError("unknown distribution family '" + s + "'");
}

PredictiveDistribution PredictiveDistribution::negative_binomial(double n, double mu) {
    if (!(n > 0.0) || !(mu > 0.0) || !std::isfinite(n) || !std::isfinite(mu)) {
        throw std::invalid_argument("negative binomial needs n > 0 and mu > 0");
    }
    return {DistributionFamily::neg_binomial, mu, n, n / (n + mu)};
}

PredictiveDistribution PredictiveDistribution::poisson(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("poisson needs mu > 0");
    return {DistributionFamily::poisson, mu, 0.0, 0.0};
}

PredictiveDistribution PredictiveDistribution::point_mass(std::int64_t location) {
    if (location < 0) throw std::invalid_argument("point mass must sit on a non-negative count");
    PredictiveDistribution d{DistributionFamily::degenerate, static_cast<double>(location), 0.0, 0.0};
    d.q05 = d.q50 = d.q95 = location;
    return d;
}

double PredictiveDistribution::mean() const {
    if (family_ == DistributionFamily::neg_binomial) return n_ * (1.0 - p_) / p_;
    return mu_;
}

double PredictiveDistribution::variance() const {
    switch (family_) {
        case DistributionFamily::neg_binomial: return n_ * (1.0 - p_) / (p_ * p_);
        case DistributionFamily::poisson: return mu_;
        case DistributionFamily::degenerate: return 0.0;
    }
    return 0.0;
}

double PredictiveDistribution::log_pmf(std::int64_t k) const {
    if (k < 0) return -std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    switch (family_) {
        case DistributionFamily::degenerate:
            return kd == mu_ ? 0.0 : -std::numeric_limits<double>::infinity();
        case DistributionFamily::poisson:
            return kd * std::log(mu_) - mu_ - log_gamma(kd + 1.0);
        case DistributionFamily::neg_binomial:
            return log_gamma(kd + n_) - log_gamma(n_) - log_gamma(kd + 1.0) - n_ * std::log1p(mu_ / n_) +
                   kd * (std::log(mu_) - std::log(n_ + mu_));
    }
    return -std::numeric_limits<double>::infinity();
}

double PredictiveDistribution::pmf(std::int64_t k) const { return std::exp(log_pmf(k)); }

std::vector<double> PredictiveDistribution::pmf_table(double tail_tolerance) const {
    std::vector<double> table;
    if (family_ == DistributionFamily::degenerate) {
        table.assign(static_cast<std::size_t>(mu_) + 1, 0.0);
        table.back() = 1.0;
        return table;
    }
    // log pmf(k) = log pmf(k-1) + log(ratio(k)); ratio is (k-1+n)/k * q for
    // the NB and mu/k for the Poisson.
    double log_p;
    double log_q = 0.0;
    if (family_ == DistributionFamily::neg_binomial) {
        log_p = -n_ * std::log1p(mu_ / n_);
        log_q = std::log(mu_) - std::log(n_ + mu_);
    } else {
        log_p = -mu_;
    }
    const double m = mean();
    const std::int64_t limit = scan_limit(m, variance());
    double cumulative = 0.0;
    for (std::int64_t k = 0; k <= limit; ++k) {
        if (k > 0) {
            const double kd = static_cast<double>(k);
            log_p += family_ == DistributionFamily::neg_binomial
                         ? std::log(kd - 1.0 + n_) - std::log(kd) + log_q
                         : std::log(mu_) - std::log(kd);
        }
        const double p = std::exp(log_p);
        table.push_back(p);
        cumulative += p;
        if (static_cast<double>(k) >= m && 1.0 - cumulative < tail_tolerance) break;
    }
    return table;
}

double target_variance(const CalibrationInput& in) {
    const double s = in.mu * in.volatility.value() * (1.0 + in.uncertainty);
    return s * s;
}

PredictiveDistribution moment_match(const CalibrationInput& in) {
    if (!(in.mu >= 0.0) || !std::isfinite(in.mu)) throw std::invalid_argument("mu must be finite and >= 0");
    if (!(in.uncertainty >= 0.0 && in.uncertainty <= 1.0)) {
        throw std::invalid_argument("uncertainty must lie in [0, 1]");
    }
    if (in.mu == 0.0) return PredictiveDistribution::point_mass(0);

    const double var = target_variance(in);
    auto dist = var > in.mu ? PredictiveDistribution::negative_binomial(in.mu * in.mu / (var - in.mu), in.mu)
                            : PredictiveDistribution::poisson(in.mu);
    dist.q05 = quantile(dist, 0.05);
    dist.q50 = quantile(dist, 0.50);
    dist.q95 = quantile(dist, 0.95);
    return dist;
}

std::int64_t quantile(const PredictiveDistribution& dist, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
    if (dist.family() == DistributionFamily::degenerate) return static_cast<std::int64_t>(dist.mu());
    const auto table = dist.pmf_table();
    double cdf = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k) {
        cdf += table[k];
        if (cdf >= q - kCdfSummationTolerance) return static_cast<std::int64_t>(k);
    }
    return static_cast<std::int64_t>(table.size()) - 1;
}

PredictiveDistribution calibrate_step(const RawForecast& raw, std::size_t k, Volatility v) {
    if (k >= raw.forecast_mean.size()) {
        throw std::out_of_range("horizon step " + std::to_string(k) + " beyond forecast length " +
                                std::to_string(raw.forecast_mean.size()));
    }
    return moment_match({raw.forecast_mean[k], v, raw.uncertainty_scale});
}

}  // namespace epicast
