#include "lrcp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lrcp/errors.hpp"

namespace lrcp {

namespace {
constexpr double kPiSquared = std::numbers::pi * std::numbers::pi;
}

double bridge_sup_cdf(double x, double tolerance) {
    if (x < 0.0) {
        throw InputError("bridge_sup_cdf: argument must be nonnegative");
    }
    if (x < 0.05) {
        return 0.0;  // below 1e-12 for sure
    }
    if (x < 1.0) {
        // Theta-dual form sqrt(2 pi)/x sum_{k odd} exp(-k^2 pi^2 / (8 x^2)).
        // Every term is positive, so the tail probability survives where the
        // alternating series cancels catastrophically.
        double sum = 0.0;
        for (int k = 1; k < 1000; k += 2) {
            const double term = std::exp(-static_cast<double>(k) * k * kPiSquared / (8.0 * x * x));
            sum += term;
            if (term < tolerance * std::max(sum, 1.0)) {
                break;
            }
        }
        return std::min(1.0, std::sqrt(2.0 * std::numbers::pi) / x * sum);
    }
    double sum = 0.0;
    double sign = -1.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < tolerance) {
            break;
        }
    }
    return std::clamp(1.0 + 2.0 * sum, 0.0, 1.0);
}

double bridge_sup_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("bridge_sup_quantile: probability must lie in (0, 1)");
    }
    double lo = 0.2;
    double hi = 4.0;
    while (bridge_sup_cdf(lo) > p && lo > 1e-3) {
        lo *= 0.5;
    }
    while (bridge_sup_cdf(hi) < p && hi < 64.0) {
        hi *= 2.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double c = bridge_sup_cdf(mid);
        if (std::abs(c - p) < 1e-9) {
            return mid;
        }
        (c < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CriticalValue critical_value(std::size_t u, double alpha) {
    if (u < 1) {
        throw InputError("critical_value: u must be at least 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("critical_value: alpha must lie in (0, 1)");
    }
    const double p = std::pow(1.0 - alpha, 1.0 / static_cast<double>(u));
    return CriticalValue{u, alpha, bridge_sup_quantile(p)};
}

std::size_t BandwidthRule::raw(std::size_t n) const {
    double v = 0.0;
    switch (form) {
        case Form::c_log10:
            v = multiplier * std::log10(static_cast<double>(n));
            break;
        case Form::c_power:
            v = multiplier * std::pow(static_cast<double>(n), exponent);
            break;
    }
    const double floored = std::floor(v);
    if (floored < 1.0) {
        return 1;
    }
    return static_cast<std::size_t>(floored);
}

std::size_t BandwidthRule::operator()(std::size_t n) const {
    return default_bandwidth(n, *this).q;
}

BandwidthResult default_bandwidth(std::size_t n, const BandwidthRule& rule) {
    if (n < 2) {
        throw InputError("default_bandwidth: n must be at least 2");
    }
    const std::size_t q = rule.raw(n);
    const std::size_t cap = n - 2;
    if (q > cap) {
        return BandwidthResult{cap, true};
    }
    return BandwidthResult{q, false};
}

BandwidthCheckReport validate_bandwidth_rule(const BandwidthRule& rule,
                                             std::optional<double> hurst,
                                             std::size_t n_max) {
    if (n_max < 4) {
        throw InputError("validate_bandwidth_rule: n_max must be at least 4");
    }
    if (hurst && !(*hurst > 0.5 && *hurst < 1.0)) {
        throw InputError("validate_bandwidth_rule: Hurst index must lie in (1/2, 1)");
    }

    BandwidthCheckReport report;
    for (std::size_t n = 2; n <= n_max; n *= 2) {
        report.grid.push_back(n);
        report.q_values.push_back(rule.raw(n));
    }
    const std::size_t m = report.grid.size();

    report.nondecreasing = true;
    report.doubling_bounded = true;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double ratio = static_cast<double>(report.q_values[i + 1]) /
                             static_cast<double>(report.q_values[i]);
        report.max_doubling_ratio = std::max(report.max_doubling_ratio, ratio);
        if (report.q_values[i + 1] < report.q_values[i]) {
            report.nondecreasing = false;
        }
        if (ratio > 4.0) {
            report.doubling_bounded = false;
        }
    }

    // Growth checks compare the last two grid octaves: the ratio
    // q(n) (log n)^p / n must not be increasing at the tail of the grid.
    // 5% slack absorbs the integer floor in q.
    const auto tail_shrinking = [&](double log_power) {
        if (m < 3) {
            return false;
        }
        const auto value = [&](std::size_t i) {
            const double n = static_cast<double>(report.grid[i]);
            return static_cast<double>(report.q_values[i]) *
                   std::pow(std::log(n), log_power) / n;
        };
        return value(m - 1) <= value(m - 2) * 1.05;
    };

    report.growth_ok = tail_shrinking(4.0);
    if (hurst) {
        report.lrd_growth_ok = tail_shrinking(7.0 / (4.0 - 4.0 * *hurst));
    }
    return report;
}

}  // namespace lrcp
