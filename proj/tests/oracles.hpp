#pragma once

// Reference implementations used to cross-check the library. They are
// written independently of the code under test: different algorithms,
// exact integer arithmetic where possible, and Boost.Math for distributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace epicast::oracle {

inline double growth(const std::vector<std::int64_t>& y, std::size_t t) {
    const double before = static_cast<double>(y[t - 4]);
    return (static_cast<double>(y[t]) - before) / (before < 1.0 ? 1.0 : before);
}

/// Largest k such that every one of the last k steps ending at t is a strict rise.
inline int streak(const std::vector<std::int64_t>& y, std::size_t t) {
    int best = 0;
    for (std::size_t k = 1; k <= t; ++k) {
        bool all_up = true;
        for (std::size_t i = 1; i <= k; ++i) all_up = all_up && y[t - i + 1] > y[t - i];
        if (all_up) best = static_cast<int>(k);
    }
    return best;
}

/// Smallest observed value x with #{v <= x} * 10 >= 9 n.
inline std::int64_t p90(const std::vector<std::int64_t>& v) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    std::int64_t best = *std::max_element(v.begin(), v.end());
    for (std::int64_t x : v) {
        const auto below = std::count_if(v.begin(), v.end(), [x](std::int64_t w) { return w <= x; });
        if (below * 10 >= 9 * n && x < best) best = x;
    }
    return best;
}

inline double volatility(const std::vector<std::int64_t>& y, std::size_t t, std::size_t window, double lo,
                         double hi) {
    std::vector<double> ch;
    const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
    for (std::size_t s = first + 1; s <= t; ++s) {
        const double prev = static_cast<double>(y[s - 1]);
        ch.push_back(std::fabs(static_cast<double>(y[s]) - prev) / std::max(1.0, prev));
    }
    const std::size_t n = ch.size();
    auto mid = ch.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(ch.begin(), mid, ch.end());
    double m = *mid;
    if (n % 2 == 0) m = 0.5 * (m + *std::max_element(ch.begin(), mid));
    return std::min(hi, std::max(lo, m));
}

/// Top-k indices by cosine similarity of integer-valued vectors, compared
/// exactly via cross-multiplication; ties go to the lower position.
inline std::vector<std::size_t> cosine_top_k(const std::vector<std::int64_t>& q,
                                             const std::vector<std::vector<std::int64_t>>& docs, std::size_t k) {
    struct Score {
        std::int64_t dot;
        std::int64_t norm2;
        std::size_t pos;
    };
    std::vector<Score> s;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::int64_t dot = 0, n2 = 0;
        for (std::size_t d = 0; d < q.size(); ++d) {
            dot += q[d] * docs[i][d];
            n2 += docs[i][d] * docs[i][d];
        }
        s.push_back({dot, n2, i});
    }
    // Compare dot_a / sqrt(n_a) with dot_b / sqrt(n_b); zero vectors score 0.
    auto key_less = [](const Score& a, const Score& b) {  // a scores strictly lower than b
        const auto sa = a.norm2 == 0 ? 0 : (a.dot > 0) - (a.dot < 0);
        const auto sb = b.norm2 == 0 ? 0 : (b.dot > 0) - (b.dot < 0);
        if (sa != sb) return sa < sb;
        if (sa == 0) return false;
        const __int128 lhs = static_cast<__int128>(a.dot) * a.dot * b.norm2;
        const __int128 rhs = static_cast<__int128>(b.dot) * b.dot * a.norm2;
        return sa > 0 ? lhs < rhs : lhs > rhs;
    };
    std::stable_sort(s.begin(), s.end(), [&](const Score& a, const Score& b) { return key_less(b, a); });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, s.size()); ++i) out.push_back(s[i].pos);
    return out;
}

/// CDF values F(0..K) from Boost.Math, K where the upper tail is below 1e-13.
inline std::vector<double> boost_cdf_nb(double n, double p) {
    boost::math::negative_binomial_distribution<double> d(n, p);
    std::vector<double> f;
    for (std::int64_t k = 0;; ++k) {
        f.push_back(boost::math::cdf(d, static_cast<double>(k)));
        if (static_cast<double>(k) > n * (1 - p) / p && boost::math::cdf(boost::math::complement(d, static_cast<double>(k))) < 1e-13) {
            break;
        }
    }
    return f;
}

inline std::vector<double> boost_cdf_poisson(double mu) {
    boost::math::poisson_distribution<double> d(mu);
    std::vector<double> f;
    for (std::int64_t k = 0;; ++k) {
        f.push_back(boost::math::cdf(d, static_cast<double>(k)));
        if (static_cast<double>(k) > mu && boost::math::cdf(boost::math::complement(d, static_cast<double>(k))) < 1e-13) {
            break;
        }
    }
    return f;
}

/// Integral over x in [0, upper] of (F(floor x) - 1{x >= y})^2 by the midpoint
/// rule with `steps_per_unit` cells per unit length.
inline double crps_grid(const std::vector<double>& cdf, std::int64_t y, int steps_per_unit = 64) {
    const auto upper = static_cast<std::int64_t>(std::max<std::size_t>(cdf.size(), static_cast<std::size_t>(y + 1))) + 1;
    const double h = 1.0 / steps_per_unit;
    double sum = 0.0;
    for (std::int64_t cell = 0; cell < upper * steps_per_unit; ++cell) {
        const double x = (static_cast<double>(cell) + 0.5) * h;
        const auto k = static_cast<std::size_t>(std::floor(x));
        const double F = k < cdf.size() ? cdf[k] : 1.0;
        const double ind = x >= static_cast<double>(y) ? 1.0 : 0.0;
        sum += (F - ind) * (F - ind) * h;
    }
    return sum;
}

/// Smallest k with F(k) >= q, from a CDF table.
inline std::int64_t quantile_from_cdf(const std::vector<double>& cdf, double q) {
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        if (cdf[k] >= q - 1e-12) return static_cast<std::int64_t>(k);
    }
    return static_cast<std::int64_t>(cdf.size());
}

}  // namespace epicast::oracle
