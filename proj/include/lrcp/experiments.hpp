#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "lrcp/asymptotics.hpp"
#include "lrcp/simulate.hpp"

namespace lrcp {

/// Simple order statistics used throughout the harness.
[[nodiscard]] double median(std::vector<double> values);
[[nodiscard]] double quantile(std::vector<double> values, double p);

/// Interquartile range of the bootstrap distribution of the median.
struct MedianSummary {
    double value = 0.0;
    double boot_iqr_lo = 0.0;
    double boot_iqr_hi = 0.0;
};
[[nodiscard]] MedianSummary median_with_bootstrap_iqr(const std::vector<double>& values,
                                                      std::uint64_t seed,
                                                      std::size_t resamples = 200);

using McModel = std::variant<ProcessSpec, ChangePointModelSpec, TwoRegimeGarchSpec>;

enum class McTransform { none, square };
enum class McStatistic {
    split_mn,  // M_n from split_statistics against c(2, alpha)
    full_tn,   // T_n on the whole series against c(1, alpha)
};

struct McConfig {
    std::size_t replications = 200;
    std::size_t n = 2000;
    std::vector<double> alphas{0.10, 0.05, 0.01};
    McModel model = ProcessSpec{IidNormalSpec{}};
    McTransform transform = McTransform::none;
    McStatistic statistic = McStatistic::split_mn;
    BandwidthRule bandwidth{};
    std::size_t min_seg = 20;
    std::uint64_t master_seed = 0;
};

struct RejectionTable {
    std::vector<double> alphas;
    std::vector<double> critical_values;
    std::vector<double> rejection_rate;
    std::vector<double> std_error;  // binomial sqrt(p(1-p)/R)
    std::size_t replications = 0;
    std::size_t n = 0;
    std::size_t failures = 0;  // replications lost to computation errors
    std::uint64_t master_seed = 0;
};

/// Simulate, test, aggregate: the rejection fraction of the configured
/// statistic at each level. Deterministic given the master seed;
/// replications draw from independent substreams. Computation errors are
/// counted per replication, not fatal.
[[nodiscard]] RejectionTable rejection_table(const McConfig& config);

/// The empirical size benchmark: returns whose GARCH(1,1) dynamics switch at
/// the 1061/2021 point between the two fitted parameter sets.
[[nodiscard]] TwoRegimeGarchSpec benchmark_size_model();
/// The empirical power benchmark: LARCH with a = 0.03, b0 = 0.25, d = 0.35.
[[nodiscard]] LarchSpec benchmark_power_model();

struct ConsistencyPoint {
    std::size_t n = 0;
    std::size_t q = 0;
    double statistic = 0.0;  // median s^2, or median q^(1-2H) s^2 when scaled
    double boot_iqr_lo = 0.0;
    double boot_iqr_hi = 0.0;
    double target = 0.0;
    double ratio = 0.0;  // statistic / target
};

struct ConsistencyReport {
    bool lrd = false;
    double hurst = 0.0;   // set when lrd
    std::size_t replications = 0;
    std::vector<ConsistencyPoint> points;
};

/// Long-run variance estimator consistency along a grid of sample sizes.
/// Weakly dependent processes are measured against the analytic sum of
/// autocovariances; long-range dependent ones against c0 / (H(2H-1)) after
/// the q^(1-2H) rescaling, with c0 fitted from the covariance oracle.
[[nodiscard]] ConsistencyReport bartlett_consistency(const ProcessSpec& process,
                                                     std::span<const std::size_t> n_grid,
                                                     const BandwidthRule& bandwidth,
                                                     std::size_t replications,
                                                     std::uint64_t master_seed);

/// Analytic long-run variance sum_j gamma_j for weakly dependent specs
/// (iid and finite moving averages).
[[nodiscard]] double analytic_long_run_variance(const ProcessSpec& process);

struct LimitFunctionalSample {
    double xi = 0.0;  // argmax location of the fractional bridge
    double v1 = 0.0;  // normalized sup over [0, xi]
    double v2 = 0.0;  // normalized sup over [xi, 1]
    bool boundary = false;
};

/// Samples of (xi, v1, v2): fractional Brownian motion on a grid via
/// cumulated exact fGn, its bridge, the first argmax of the absolute bridge
/// and the two re-normalized sup functionals on either side.
[[nodiscard]] std::vector<LimitFunctionalSample> limit_functional_samples(
    double hurst, std::size_t grid_n, std::size_t replications, std::uint64_t master_seed);

enum class DivergenceKind { lrd, changepoint, iid };

struct DivergenceReport {
    std::size_t n_small = 0;
    std::size_t n_large = 0;
    std::size_t replications = 0;
    MedianSummary mn_small, mn_large;
    MedianSummary tn_small, tn_large;
    double mn_ratio = 0.0;
    double tn_ratio = 0.0;
    DivergenceKind kind = DivergenceKind::iid;
    bool pass = false;
    std::size_t failures = 0;
};

/// Median M_n and T_n at two sample sizes. Pass means: growing medians for
/// long-range dependent input; a T_n ratio within 35% of
/// sqrt(n_large/n_small) for change-point input; a flat ratio in
/// [0.8, 1.25] for iid input.
[[nodiscard]] DivergenceReport divergence_check(const McModel& model, std::size_t n_small,
                                                std::size_t n_large, std::size_t replications,
                                                DivergenceKind kind,
                                                McTransform transform = McTransform::none,
                                                const BandwidthRule& bandwidth = {},
                                                std::uint64_t master_seed = 0);

/// One replication of the configured model, transform applied.
[[nodiscard]] Series simulate_model(const McModel& model, std::size_t n, McTransform transform,
                                    Rng& rng);

}  // namespace lrcp
