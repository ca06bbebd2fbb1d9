#include "vzeno/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vzeno::stats {

double Running::stderr_mean() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double mean(std::span<const double> xs) {
    Running r;
    for (double x : xs) r.add(x);
    return r.mean;
}

double sample_std(std::span<const double> xs) {
    Running r;
    for (double x : xs) r.add(x);
    return std::sqrt(r.variance());
}

double stderr_mean(std::span<const double> xs) {
    Running r;
    for (double x : xs) r.add(x);
    return r.stderr_mean();
}

namespace {

double gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cont_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_cont_fraction(a, x);
}

double chi2_sf(double chi2, std::size_t dof) {
    if (dof == 0) return 1.0;
    return gammq(0.5 * static_cast<double>(dof), 0.5 * chi2);
}

GeometricFit fit_geometric(std::span<const std::size_t> run_lengths) {
    GeometricFit fit;
    fit.n = run_lengths.size();
    if (fit.n == 0) return fit;
    double sum = 0.0;
    for (auto v : run_lengths) sum += static_cast<double>(v);
    const double nbar = sum / static_cast<double>(fit.n);
    fit.p_hat = 1.0 / nbar;  // maximum-likelihood estimate
    // Var(n) = (1-p)/p^2, delta method on p = 1/nbar.
    const double var_n = (1.0 - fit.p_hat) / (fit.p_hat * fit.p_hat);
    fit.se_p = fit.p_hat * fit.p_hat * std::sqrt(var_n / static_cast<double>(fit.n));

    // Chi-square against the fitted law, merging the tail so expected
    // counts stay >= 5.
    const double n_total = static_cast<double>(fit.n);
    std::size_t max_len = 0;
    for (auto v : run_lengths) max_len = std::max(max_len, v);
    std::vector<double> observed;
    std::vector<double> expected;
    double tail_prob = 1.0;
    std::size_t k = 1;
    for (; k <= max_len; ++k) {
        const double pk = std::pow(1.0 - fit.p_hat, static_cast<double>(k - 1)) * fit.p_hat;
        if (tail_prob * n_total < 10.0 || pk * n_total < 5.0) break;
        std::size_t count = 0;
        for (auto v : run_lengths) count += (v == k);
        observed.push_back(static_cast<double>(count));
        expected.push_back(pk * n_total);
        tail_prob -= pk;
    }
    std::size_t tail_count = 0;
    for (auto v : run_lengths) tail_count += (v >= k);
    if (tail_prob * n_total >= 1.0 && !observed.empty()) {
        observed.push_back(static_cast<double>(tail_count));
        expected.push_back(tail_prob * n_total);
    }
    if (observed.size() >= 3) {
        double chi2 = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i) {
            const double d = observed[i] - expected[i];
            chi2 += d * d / expected[i];
        }
        fit.chi2 = chi2;
        fit.dof = observed.size() - 2;  // one parameter fitted, one normalization
        fit.p_value = chi2_sf(chi2, fit.dof);
    }
    return fit;
}

KsResult ks_test(std::vector<double> cdf_values) {
    if (cdf_values.empty()) return {0.0, 1.0};
    std::sort(cdf_values.begin(), cdf_values.end());
    const double n = static_cast<double>(cdf_values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_values.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf_values[i] - lo, hi - cdf_values[i]));
    }
    // Asymptotic Kolmogorov distribution with the small-sample correction.
    const double en = std::sqrt(n);
    const double lambda = (en + 0.12 + 0.11 / en) * d;
    double p = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * 2.0 * std::exp(-2.0 * lambda * lambda * j * j);
        p += term;
        if (std::abs(term) < 1e-12) break;
        sign = -sign;
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("regression_slope: need matching x,y with >= 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace vzeno::stats
