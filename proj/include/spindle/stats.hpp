#ifndef SPINDLE_STATS_HPP
#define SPINDLE_STATS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "spindle/errors.hpp"

namespace spindle {

// Mean / unbiased variance of a replication batch with standard errors:
// se_mean = s / sqrt(M); the variance gets the normal-theory standard error
// s^2 * sqrt(2 / (M - 1)) plus a jackknife alternative as a cross-check.
struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;
    double se_var_jackknife = std::numeric_limits<double>::quiet_NaN();
    std::size_t m = 0;
};

inline Moments compute_moments(std::span<const double> xs) {
    const std::size_t m = xs.size();
    if (m < 2) throw InsufficientReplications("compute_moments: need at least 2 replications");
    double s1 = 0.0;
    for (double x : xs) s1 += x;
    const double mean = s1 / static_cast<double>(m);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double md = static_cast<double>(m);
    Moments out;
    out.m = m;
    out.mean = mean;
    out.var = ss / (md - 1.0);
    out.se_mean = std::sqrt(out.var / md);
    out.se_var = out.var * std::sqrt(2.0 / (md - 1.0));
    if (m >= 3) {
        // Leave-one-out variances from the totals, then the jackknife spread.
        double s2 = 0.0;
        for (double x : xs) s2 += x * x;
        double jsum = 0.0, jsumsq = 0.0;
        for (double x : xs) {
            const double mu_i = (s1 - x) / (md - 1.0);
            const double var_i = (s2 - x * x - (md - 1.0) * mu_i * mu_i) / (md - 2.0);
            jsum += var_i;
            jsumsq += var_i * var_i;
        }
        const double jmean = jsum / md;
        out.se_var_jackknife = std::sqrt(std::max(0.0, (md - 1.0) / md) *
                                         std::max(0.0, jsumsq - md * jmean * jmean));
    }
    return out;
}

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points_used = 0;
};

// Least squares of log(value) on log(n), optionally with inverse-variance
// weights; the slope standard error comes from the weighted residuals.
inline FitResult fit_exponent(std::span<const std::pair<double, double>> pairs,
                              std::span<const double> weights = {}) {
    const std::size_t n = pairs.size();
    if (n < 3) throw InsufficientPoints("fit_exponent: need at least 3 points");
    if (!weights.empty() && weights.size() != n)
        throw ConfigError("fit_exponent: weights size mismatch");
    std::vector<double> x(n), y(n), w(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0))
            throw NonpositiveValue("fit_exponent: log-log fit needs positive data");
        x[i] = std::log(pairs[i].first);
        y[i] = std::log(pairs[i].second);
        if (!weights.empty()) {
            if (!(weights[i] > 0.0)) throw NonpositiveValue("fit_exponent: weights must be > 0");
            w[i] = weights[i];
        }
    }
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    FitResult fit;
    fit.points_used = n;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double res = y[i] - fit.intercept - fit.slope * x[i];
        rss += w[i] * res * res;
    }
    fit.slope_stderr = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
    return fit;
}

}  // namespace spindle

#endif  // SPINDLE_STATS_HPP
