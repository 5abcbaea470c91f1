#include "lrcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrcp/asymptotics.hpp"
#include "lrcp/errors.hpp"

namespace lrcp {

namespace {

// Relative floor below which a variance estimate counts as zero.
constexpr double kVarianceTolerance = 1e-12;

// Demeaned copy of x, mean taken over the whole span with compensation.
std::vector<double> demeaned(std::span<const double> x) {
    const double mean = compensated_total(x) / static_cast<double>(x.size());
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] - mean;
    }
    return y;
}

double lagged_product_sum(std::span<const double> y, std::size_t lag) {
    CompensatedSum acc;
    for (std::size_t i = 0; i + lag < y.size(); ++i) {
        acc.add(y[i] * y[i + lag]);
    }
    return acc.value();
}

double checked_long_run_sd(std::span<const double> x, std::size_t q, const char* what) {
    const LongRunVarianceEstimate est = long_run_variance(x, q);
    const double gamma0 = sample_autocovariance(x, 0);
    if (est.value <= kVarianceTolerance * gamma0 || est.value <= 0.0) {
        throw ZeroVarianceError(std::string(what) +
                                ": long-run variance is zero; the series carries no "
                                "fluctuation to normalize against");
    }
    return std::sqrt(est.value);
}

}  // namespace

double compensated_total(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

KernelWeights KernelWeights::custom(std::vector<double> w) {
    for (double wj : w) {
        if (!(wj >= 0.0 && wj <= 1.0)) {
            throw InputError("kernel weights must lie in [0, 1]");
        }
    }
    KernelWeights k;
    k.q = w.size();
    k.weights = std::move(w);
    k.id = KernelId::custom;
    return k;
}

KernelWeights bartlett_weights(std::size_t q) {
    KernelWeights k;
    k.q = q;
    k.id = KernelId::bartlett;
    k.weights.resize(q);
    for (std::size_t j = 1; j <= q; ++j) {
        k.weights[j - 1] = 1.0 - static_cast<double>(j) / static_cast<double>(q + 1);
    }
    return k;
}

double sample_autocovariance(std::span<const double> x, std::size_t lag) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw InputError("sample_autocovariance: empty series");
    }
    if (lag > n - 1) {
        throw InputError("sample_autocovariance: lag " + std::to_string(lag) +
                         " out of range for n = " + std::to_string(n));
    }
    const std::vector<double> y = demeaned(x);
    return lagged_product_sum(y, lag) / static_cast<double>(n);
}

LongRunVarianceEstimate long_run_variance(std::span<const double> x,
                                          const KernelWeights& kernel) {
    const std::size_t n = x.size();
    if (n < 2) {
        throw InputError("long_run_variance: need at least two observations");
    }
    if (kernel.q > n - 1) {
        throw InputError("long_run_variance: bandwidth q = " + std::to_string(kernel.q) +
                         " exceeds n - 1 = " + std::to_string(n - 1));
    }
    const std::vector<double> y = demeaned(x);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double gamma0 = lagged_product_sum(y, 0) * inv_n;

    CompensatedSum acc;
    acc.add(gamma0);
    for (std::size_t j = 1; j <= kernel.q; ++j) {
        acc.add(2.0 * kernel.weights[j - 1] * lagged_product_sum(y, j) * inv_n);
    }
    double s2 = acc.value();

    const double tol = kVarianceTolerance * gamma0;
    if (s2 < -tol) {
        throw NegativeVarianceError(
            "long_run_variance: estimate " + std::to_string(s2) +
            " is negative; the supplied kernel is inadmissible for this input");
    }
    s2 = std::max(s2, 0.0);

    return LongRunVarianceEstimate{s2, kernel.q, kernel.id};
}

LongRunVarianceEstimate long_run_variance(std::span<const double> x, std::size_t q) {
    return long_run_variance(x, bartlett_weights(q));
}

std::vector<double> cusum_profile(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw InputError("cusum_profile: empty series");
    }
    std::vector<double> partial(n);
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(x[i]);
        partial[i] = acc.value();
    }
    const double total = partial[n - 1];
    std::vector<double> profile(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double share = static_cast<double>(k) / static_cast<double>(n);
        profile[k - 1] = std::abs(partial[k - 1] - share * total);
    }
    return profile;
}

double cusum_statistic(std::span<const double> x, const KernelWeights& kernel) {
    const std::size_t n = x.size();
    if (n < 2) {
        throw InputError("cusum_statistic: need at least two observations");
    }
    const LongRunVarianceEstimate est = long_run_variance(x, kernel);
    const double gamma0 = sample_autocovariance(x, 0);
    if (est.value <= kVarianceTolerance * gamma0 || est.value <= 0.0) {
        throw ZeroVarianceError("cusum_statistic: long-run variance is zero");
    }
    const std::vector<double> profile = cusum_profile(x);
    const double peak = *std::max_element(profile.begin(), profile.end());
    return peak / (std::sqrt(static_cast<double>(n)) * std::sqrt(est.value));
}

double cusum_statistic(std::span<const double> x, std::size_t q) {
    return cusum_statistic(x, bartlett_weights(q));
}

std::size_t changepoint_estimator(std::span<const double> x) {
    if (x.size() < 2) {
        throw InputError("changepoint_estimator: need at least two observations");
    }
    const std::vector<double> profile = cusum_profile(x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < profile.size(); ++k) {
        if (profile[k] > profile[best]) {
            best = k;
        }
    }
    return best + 1;
}

SplitTestResult split_statistics(std::span<const double> x, const BandwidthRule& bandwidth,
                                 std::size_t min_seg) {
    const std::size_t n = x.size();
    if (min_seg < 2) {
        throw InputError("split_statistics: min_seg must be at least 2");
    }
    if (n < 2 * min_seg) {
        throw SegmentTooShortError("split_statistics: series of length " + std::to_string(n) +
                                   " cannot hold two segments of " + std::to_string(min_seg));
    }

    const std::size_t khat = changepoint_estimator(x);
    const std::size_t len1 = khat;
    const std::size_t len2 = n - khat;

    const auto guard = [&](std::size_t len, const char* side) -> std::size_t {
        if (len < min_seg) {
            throw SegmentTooShortError("split_statistics: " + std::string(side) +
                                       " segment has length " + std::to_string(len) +
                                       " < min_seg = " + std::to_string(min_seg));
        }
        const BandwidthResult bw = default_bandwidth(len, bandwidth);
        if (bw.clamped) {
            throw SegmentTooShortError("split_statistics: " + std::string(side) +
                                       " segment of length " + std::to_string(len) +
                                       " is too short for its bandwidth");
        }
        return bw.q;
    };

    SplitTestResult r;
    r.khat = khat;
    r.q1 = guard(len1, "left");
    r.q2 = guard(len2, "right");

    const std::span<const double> first = x.first(len1);
    const std::span<const double> second = x.subspan(len1);

    r.s1 = checked_long_run_sd(first, r.q1, "split_statistics (left segment)");
    r.s2 = checked_long_run_sd(second, r.q2, "split_statistics (right segment)");

    const std::vector<double> p1 = cusum_profile(first);
    const std::vector<double> p2 = cusum_profile(second);
    r.t1 = *std::max_element(p1.begin(), p1.end()) /
           (std::sqrt(static_cast<double>(len1)) * r.s1);
    r.t2 = *std::max_element(p2.begin(), p2.end()) /
           (std::sqrt(static_cast<double>(len2)) * r.s2);
    r.mn = std::max(r.t1, r.t2);
    return r;
}

double scaled_statistic(std::span<const double> x, std::size_t q, double hurst) {
    if (!(hurst >= 0.5 && hurst < 1.0)) {
        throw InputError("scaled_statistic: Hurst index must lie in [1/2, 1)");
    }
    const double t = cusum_statistic(x, q);
    if (hurst == 0.5) {
        return t;
    }
    const double ratio = static_cast<double>(q) / static_cast<double>(x.size());
    return std::pow(ratio, hurst - 0.5) * t;
}

}  // namespace lrcp
