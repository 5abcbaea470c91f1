#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrcp/series.hpp"

namespace lrcp {

struct BandwidthRule;  // asymptotics.hpp

/// Compensated (Neumaier) accumulator. Partial sums and autocovariance
/// products go through this so that identities such as a vanishing final
/// CUSUM deviation and affine invariance survive long inputs.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

[[nodiscard]] double compensated_total(std::span<const double> values) noexcept;

enum class KernelId { bartlett, custom };

/// Lag weights omega_1..omega_q for the long-run variance estimator.
///
/// Admissible weights lie in [0, 1], vanish beyond the bandwidth and tend to
/// 1 pointwise in the lag as the bandwidth grows. The Bartlett kernel
/// omega_j = 1 - j/(q+1) is the built-in; custom weights may be supplied but
/// can produce negative variance estimates, which the estimator rejects.
struct KernelWeights {
    std::size_t q = 0;
    std::vector<double> weights;  // size q
    KernelId id = KernelId::custom;

    static KernelWeights custom(std::vector<double> w);
};

/// Bartlett weights 1 - j/(q+1), j = 1..q; empty for q = 0.
[[nodiscard]] KernelWeights bartlett_weights(std::size_t q);

struct LongRunVarianceEstimate {
    double value = 0.0;  // s^2, variance units
    std::size_t q_used = 0;
    KernelId kernel_id = KernelId::bartlett;
};

/// Sample autocovariance at the given lag with divisor n (not n - lag) and
/// the full-sample mean:
///
///   gamma_hat(j) = (1/n) sum_{i=1..n-j} (X_i - mean)(X_{i+j} - mean)
///
/// Requires 0 <= lag <= n - 1.
[[nodiscard]] double sample_autocovariance(std::span<const double> x, std::size_t lag);

/// Weighted long-run variance estimate
///
///   s^2 = gamma_hat(0) + 2 sum_{j=1..q} omega_j gamma_hat(j).
///
/// Applied to a prefix or suffix view this is exactly the per-segment
/// estimator used by split_statistics (segment mean, segment bandwidth, all
/// lagged products inside the segment). Requires n >= 2 and q <= n - 1.
/// Throws NegativeVarianceError when a custom kernel drives the estimate
/// meaningfully below zero; the Bartlett kernel cannot.
[[nodiscard]] LongRunVarianceEstimate long_run_variance(std::span<const double> x,
                                                        const KernelWeights& kernel);
[[nodiscard]] LongRunVarianceEstimate long_run_variance(std::span<const double> x, std::size_t q);

/// CUSUM deviation profile D_k = |S_k - (k/n) S_n| for k = 1..n, where S_k
/// is the k-th partial sum. The last entry is identically zero.
[[nodiscard]] std::vector<double> cusum_profile(std::span<const double> x);

/// Self-normalized CUSUM statistic  T = max_k D_k / (sqrt(n) s),  with s the
/// Bartlett long-run standard deviation at the given bandwidth.
/// Throws ZeroVarianceError when s^2 is zero within tolerance.
[[nodiscard]] double cusum_statistic(std::span<const double> x, std::size_t q);
[[nodiscard]] double cusum_statistic(std::span<const double> x, const KernelWeights& kernel);

/// Change-point estimator: the smallest k (1-based) at which the CUSUM
/// profile attains its maximum. Comparison is exact; ties keep the first.
[[nodiscard]] std::size_t changepoint_estimator(std::span<const double> x);

/// Output of the two-segment split test.
struct SplitTestResult {
    std::size_t khat = 0;  // estimated change point, 1-based
    double t1 = 0.0;       // CUSUM statistic of X_1..X_khat
    double t2 = 0.0;       // CUSUM statistic of X_{khat+1}..X_n
    double s1 = 0.0;       // long-run std dev of the first segment
    double s2 = 0.0;       // long-run std dev of the second segment
    double mn = 0.0;       // max(t1, t2)
    std::size_t q1 = 0;    // bandwidth used on the first segment
    std::size_t q2 = 0;    // bandwidth used on the second segment
};

/// Split the series at the estimated change point and compute the
/// self-normalized CUSUM statistic on each side, each with its own mean,
/// own bandwidth q(segment length) and own long-run variance.
///
/// Each segment must be at least `min_seg` long and long enough for its
/// bandwidth (q <= length - 2); otherwise SegmentTooShortError.
[[nodiscard]] SplitTestResult split_statistics(std::span<const double> x,
                                               const BandwidthRule& bandwidth,
                                               std::size_t min_seg = 20);

/// (q/n)^(H - 1/2) * T_n: the scaling that stabilizes the CUSUM statistic
/// under long-range dependence with Hurst index H in [1/2, 1).
[[nodiscard]] double scaled_statistic(std::span<const double> x, std::size_t q, double hurst);

}  // namespace lrcp
