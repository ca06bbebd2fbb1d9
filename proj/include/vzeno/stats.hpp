#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vzeno::stats {

/// Online mean / variance accumulator (Welford).
struct Running {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d1 = x - mean;
        mean += d1 / static_cast<double>(n);
        m2 += d1 * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double stderr_mean() const;
};

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);
/// Standard error of the mean, sample std / sqrt(n).
double stderr_mean(std::span<const double> xs);

/// Regularized upper incomplete gamma Q(a, x); Q(dof/2, chi2/2) is the
/// chi-square survival function.
double gammq(double a, double x);

double chi2_sf(double chi2, std::size_t dof);

/// Fit of positive-integer run lengths to a geometric law
/// P(n) = (1-p)^{n-1} p and a chi-square goodness-of-fit with tail bins
/// merged so every expected count is >= 5.
struct GeometricFit {
    double p_hat = 0.0;
    double se_p = 0.0;
    double chi2 = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;  // 1 when too few samples to bin
    std::size_t n = 0;
};

GeometricFit fit_geometric(std::span<const std::size_t> run_lengths);

/// One-sample Kolmogorov-Smirnov test against a given cdf evaluated at the
/// samples; asymptotic p-value.
struct KsResult {
    double d = 0.0;
    double p_value = 0.0;
};

KsResult ks_test(std::vector<double> cdf_values);

/// Least-squares slope of y against x (used for the N^{-1/2} scaling check).
double regression_slope(std::span<const double> x, std::span<const double> y);

}  // namespace vzeno::stats
