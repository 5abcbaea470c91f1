#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace lrcp {

/// P(sup_{0<=t<=1} |B(t)| <= x) for a Brownian bridge B, via the classical
/// alternating series 1 + 2 sum_{k>=1} (-1)^k exp(-2 k^2 x^2), truncated when
/// the next term falls below `tolerance`. For x < 0.05 the probability is
/// below 1e-12 and 0 is returned directly.
[[nodiscard]] double bridge_sup_cdf(double x, double tolerance = 1e-12);

/// Inverse of bridge_sup_cdf on (0, 1), by bracketing and bisection to
/// |cdf(x) - p| < 1e-9.
[[nodiscard]] double bridge_sup_quantile(double p);

struct CriticalValue {
    std::size_t u = 1;   // number of independent bridges in the maximum
    double alpha = 0.0;  // test level
    double value = 0.0;
};

/// Critical value c(u) with P(max of u independent bridge suprema > c) =
/// alpha, i.e. the (1 - alpha)^(1/u) quantile of one bridge supremum.
[[nodiscard]] CriticalValue critical_value(std::size_t u, double alpha);

/// Bandwidth rule q(n) for the long-run variance estimator. The default is
/// floor(c * log10(n)) with c = 15; a power-law form floor(c * n^beta) is
/// also available. Values are floored to an integer, at least 1 and clamped
/// to n - 2.
struct BandwidthRule {
    enum class Form { c_log10, c_power };

    Form form = Form::c_log10;
    double multiplier = 15.0;  // c
    double exponent = 0.5;     // beta, used by c_power only

    /// Raw rule value max(1, floor(.)), before the n - 2 clamp.
    [[nodiscard]] std::size_t raw(std::size_t n) const;
    /// Clamped bandwidth, ready to use on a series of length n.
    [[nodiscard]] std::size_t operator()(std::size_t n) const;
};

struct BandwidthResult {
    std::size_t q = 0;
    bool clamped = false;  // true when the raw rule value exceeded n - 2
};

/// Bandwidth for a series of length n (n >= 2), with a flag indicating
/// whether the n - 2 clamp fired.
[[nodiscard]] BandwidthResult default_bandwidth(std::size_t n, const BandwidthRule& rule = {});

/// Finite-grid report on the bandwidth growth conditions. Each check is
/// necessary-at-scale evidence, not a proof: the conditions are asymptotic
/// and are evaluated on a doubling grid n = 2, 4, ..., n_max.
struct BandwidthCheckReport {
    bool nondecreasing = false;
    bool doubling_bounded = false;       // q(2n)/q(n) <= 4 across the grid
    bool growth_ok = false;              // q(n) (log n)^4 / n shrinking at the tail
    std::optional<bool> lrd_growth_ok;   // q(n) (log n)^(7/(4-4H)) / n shrinking at the tail
    double max_doubling_ratio = 0.0;
    std::vector<std::size_t> grid;
    std::vector<std::size_t> q_values;

    [[nodiscard]] bool all_pass() const {
        return nondecreasing && doubling_bounded && growth_ok &&
               (!lrd_growth_ok.has_value() || *lrd_growth_ok);
    }
};

[[nodiscard]] BandwidthCheckReport validate_bandwidth_rule(const BandwidthRule& rule,
                                                           std::optional<double> hurst,
                                                           std::size_t n_max);

}  // namespace lrcp
