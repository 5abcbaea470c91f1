#include "lrcp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "lrcp/errors.hpp"
#include "lrcp/stats.hpp"

namespace lrcp {

namespace {

double hurst_of(const ProcessSpec& process) {
    if (const auto* fgn = std::get_if<FgnSpec>(&process)) {
        return fgn->hurst;
    }
    if (const auto* farima = std::get_if<FarimaSpec>(&process)) {
        return farima->d + 0.5;
    }
    throw InputError("process has no Hurst index");
}

bool is_lrd(const ProcessSpec& process) {
    return std::holds_alternative<FgnSpec>(process) ||
           std::holds_alternative<FarimaSpec>(process);
}

// c0 in gamma_j ~ c0 j^(2H-2), fitted from the covariance oracle at large
// lags (average of gamma_j j^(2-2H) over a spread of anchor points).
double fitted_c0(const ProcessSpec& process) {
    const double h = hurst_of(process);
    const std::vector<std::size_t> anchors{4000, 6000, 8000, 10000};
    double acc = 0.0;
    if (const auto* fgn = std::get_if<FgnSpec>(&process)) {
        for (std::size_t j : anchors) {
            acc += fgn_autocovariance(fgn->hurst, j) *
                   std::pow(static_cast<double>(j), 2.0 - 2.0 * h);
        }
        return acc / static_cast<double>(anchors.size());
    }
    const auto& farima = std::get<FarimaSpec>(process);
    const std::size_t m = std::max<std::size_t>(
        farima.truncation > 0 ? farima.truncation : 0, 4 * anchors.back());
    const std::vector<double> coeffs = farima_coefficients(farima.d, m);
    for (std::size_t j : anchors) {
        acc += linear_autocovariance(coeffs, j) *
               std::pow(static_cast<double>(j), 2.0 - 2.0 * h);
    }
    return acc / static_cast<double>(anchors.size());
}

}  // namespace

double quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw InputError("quantile: empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("quantile: p must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * values[lo] + w * values[hi];
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

MedianSummary median_with_bootstrap_iqr(const std::vector<double>& values, std::uint64_t seed,
                                        std::size_t resamples) {
    MedianSummary s;
    s.value = median(values);
    if (values.size() < 2 || resamples == 0) {
        s.boot_iqr_lo = s.boot_iqr_hi = s.value;
        return s;
    }
    Rng rng = Rng::substream(seed, 0xB007);
    std::vector<double> boot_medians(resamples);
    std::vector<double> resample(values.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        for (double& v : resample) {
            v = values[static_cast<std::size_t>(rng.next_u64() % values.size())];
        }
        boot_medians[b] = median(resample);
    }
    s.boot_iqr_lo = quantile(boot_medians, 0.25);
    s.boot_iqr_hi = quantile(boot_medians, 0.75);
    return s;
}

Series simulate_model(const McModel& model, std::size_t n, McTransform transform, Rng& rng) {
    Series series = std::visit(
        [&](const auto& m) -> Series {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProcessSpec>) {
                return simulate(m, n, rng);
            } else if constexpr (std::is_same_v<T, ChangePointModelSpec>) {
                return simulate_changepoint(m, n, rng);
            } else {
                return simulate_two_regime_garch(m, n, rng);
            }
        },
        model);
    if (transform == McTransform::none) {
        return series;
    }
    std::vector<double> squared(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        squared[i] = series[i] * series[i];
    }
    return Series(std::move(squared));
}

RejectionTable rejection_table(const McConfig& config) {
    if (config.replications < 1) {
        throw InputError("rejection_table: need at least one replication");
    }
    for (double a : config.alphas) {
        if (!(a > 0.0 && a < 1.0)) {
            throw InputError("rejection_table: alpha levels must lie in (0, 1)");
        }
    }

    RejectionTable table;
    table.alphas = config.alphas;
    table.replications = config.replications;
    table.n = config.n;
    table.master_seed = config.master_seed;

    const std::size_t u = config.statistic == McStatistic::split_mn ? 2 : 1;
    for (double a : config.alphas) {
        table.critical_values.push_back(critical_value(u, a).value);
    }

    std::vector<std::size_t> rejections(config.alphas.size(), 0);
    std::size_t completed = 0;
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
        Rng rng = Rng::substream(config.master_seed, rep);
        try {
            const Series x = simulate_model(config.model, config.n, config.transform, rng);
            double stat = 0.0;
            if (config.statistic == McStatistic::split_mn) {
                stat = split_statistics(x, config.bandwidth, config.min_seg).mn;
            } else {
                stat = cusum_statistic(x, config.bandwidth(config.n));
            }
            for (std::size_t i = 0; i < table.critical_values.size(); ++i) {
                if (stat > table.critical_values[i]) {
                    ++rejections[i];
                }
            }
            ++completed;
        } catch (const ComputationError&) {
            ++table.failures;
        }
    }
    if (completed == 0) {
        throw ComputationError("rejection_table: every replication failed");
    }
    for (std::size_t i = 0; i < config.alphas.size(); ++i) {
        const double p = static_cast<double>(rejections[i]) / static_cast<double>(completed);
        table.rejection_rate.push_back(p);
        table.std_error.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(completed)));
    }
    return table;
}

TwoRegimeGarchSpec benchmark_size_model() {
    TwoRegimeGarchSpec spec;
    spec.before = GarchSpec{0.02461474, {0.06404848}, {0.87864088}, 2000};
    spec.after = GarchSpec{0.09540076, {0.09734341}, {0.83945713}, 2000};
    spec.theta = 1061.0 / 2021.0;
    return spec;
}

LarchSpec benchmark_power_model() {
    LarchSpec spec;
    spec.a = 0.03;
    spec.b0 = 0.25;
    spec.d = 0.35;
    spec.truncation = 2000;
    spec.burnin = 5000;
    return spec;
}

double analytic_long_run_variance(const ProcessSpec& process) {
    if (const auto* iid = std::get_if<IidNormalSpec>(&process)) {
        return iid->sd * iid->sd;
    }
    if (const auto* ma = std::get_if<LinearMaSpec>(&process)) {
        // sum over all lags of gamma_j equals (sum a_j)^2 for unit-variance
        // innovations.
        const double total = std::accumulate(ma->coeffs.begin(), ma->coeffs.end(), 0.0);
        return total * total;
    }
    throw InputError("analytic_long_run_variance: only iid and moving averages supported");
}

ConsistencyReport bartlett_consistency(const ProcessSpec& process,
                                       std::span<const std::size_t> n_grid,
                                       const BandwidthRule& bandwidth,
                                       std::size_t replications, std::uint64_t master_seed) {
    if (n_grid.empty() || replications < 1) {
        throw InputError("bartlett_consistency: empty grid or no replications");
    }
    ConsistencyReport report;
    report.replications = replications;
    report.lrd = is_lrd(process);

    double target = 0.0;
    if (report.lrd) {
        report.hurst = hurst_of(process);
        target = fitted_c0(process) / (report.hurst * (2.0 * report.hurst - 1.0));
    } else {
        target = analytic_long_run_variance(process);
    }

    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        const std::size_t q = bandwidth(n);

        // One sampler per grid size: the fGn factorization is shared across
        // replications.
        std::unique_ptr<FgnSampler> sampler;
        if (const auto* fgn = std::get_if<FgnSpec>(&process)) {
            sampler = std::make_unique<FgnSampler>(fgn->hurst, n);
        }

        std::vector<double> stats(replications);
        for (std::size_t rep = 0; rep < replications; ++rep) {
            Rng rng = Rng::substream(master_seed, gi * 1000003ULL + rep);
            std::vector<double> path;
            if (sampler) {
                path = sampler->sample(rng);
            } else {
                const Series series = simulate(process, n, rng);
                path.assign(series.values().begin(), series.values().end());
            }
            double s2 = long_run_variance(path, q).value;
            if (report.lrd) {
                s2 *= std::pow(static_cast<double>(q), 1.0 - 2.0 * report.hurst);
            }
            stats[rep] = s2;
        }

        const MedianSummary ms = median_with_bootstrap_iqr(stats, master_seed + gi);
        ConsistencyPoint point;
        point.n = n;
        point.q = q;
        point.statistic = ms.value;
        point.boot_iqr_lo = ms.boot_iqr_lo;
        point.boot_iqr_hi = ms.boot_iqr_hi;
        point.target = target;
        point.ratio = ms.value / target;
        report.points.push_back(point);
    }
    return report;
}

std::vector<LimitFunctionalSample> limit_functional_samples(double hurst, std::size_t grid_n,
                                                            std::size_t replications,
                                                            std::uint64_t master_seed) {
    if (grid_n < 8) {
        throw InputError("limit_functional_samples: grid too small");
    }
    const FgnSampler sampler(hurst, grid_n);
    const double n = static_cast<double>(grid_n);
    const double inv_nh = std::pow(n, -hurst);

    std::vector<LimitFunctionalSample> samples;
    samples.reserve(replications);
    for (std::size_t rep = 0; rep < replications; ++rep) {
        Rng rng = Rng::substream(master_seed, rep);
        const std::vector<double> z = sampler.sample(rng);

        // W_H on the grid i/n via scaled partial sums; bridge and argmax.
        std::vector<double> w(grid_n);
        CompensatedSum acc;
        for (std::size_t i = 0; i < grid_n; ++i) {
            acc.add(z[i]);
            w[i] = acc.value() * inv_nh;
        }
        const double w_end = w[grid_n - 1];
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < grid_n; ++i) {
            const double t = static_cast<double>(i + 1) / n;
            const double bridge = std::abs(w[i] - t * w_end);
            if (bridge > best) {
                best = bridge;
                arg = i;
            }
        }

        LimitFunctionalSample s;
        const std::size_t k = arg + 1;  // argmax in 1..n
        s.xi = static_cast<double>(k) / n;
        s.boundary = (k == grid_n) || (k == 1);

        // sup over [0, xi] of |W(t) - (t/xi) W(xi)|, normalized by sqrt(xi).
        const double w_xi = w[arg];
        double sup1 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double share = static_cast<double>(i + 1) / static_cast<double>(k);
            sup1 = std::max(sup1, std::abs(w[i] - share * w_xi));
        }
        s.v1 = sup1 / std::sqrt(s.xi);

        double sup2 = 0.0;
        if (k < grid_n) {
            const std::size_t rest = grid_n - k;
            for (std::size_t i = k; i < grid_n; ++i) {
                const double share =
                    static_cast<double>(i + 1 - k) / static_cast<double>(rest);
                sup2 = std::max(sup2, std::abs((w[i] - w_xi) - share * (w_end - w_xi)));
            }
            s.v2 = sup2 / std::sqrt(1.0 - s.xi);
        }
        samples.push_back(s);
    }
    return samples;
}

DivergenceReport divergence_check(const McModel& model, std::size_t n_small,
                                  std::size_t n_large, std::size_t replications,
                                  DivergenceKind kind, McTransform transform,
                                  const BandwidthRule& bandwidth, std::uint64_t master_seed) {
    if (n_small >= n_large) {
        throw InputError("divergence_check: n_small must be below n_large");
    }
    DivergenceReport report;
    report.n_small = n_small;
    report.n_large = n_large;
    report.replications = replications;
    report.kind = kind;

    const auto run = [&](std::size_t n, std::uint64_t salt, std::vector<double>& mn_out,
                         std::vector<double>& tn_out) {
        for (std::size_t rep = 0; rep < replications; ++rep) {
            Rng rng = Rng::substream(master_seed, salt + rep);
            try {
                const Series x = simulate_model(model, n, transform, rng);
                tn_out.push_back(cusum_statistic(x, bandwidth(n)));
                mn_out.push_back(split_statistics(x, bandwidth).mn);
            } catch (const ComputationError&) {
                ++report.failures;
            }
        }
    };

    std::vector<double> mn_s, tn_s, mn_l, tn_l;
    run(n_small, 0, mn_s, tn_s);
    run(n_large, 1000003ULL, mn_l, tn_l);
    if (mn_s.empty() || mn_l.empty()) {
        throw ComputationError("divergence_check: all replications failed");
    }

    report.mn_small = median_with_bootstrap_iqr(mn_s, master_seed + 1);
    report.mn_large = median_with_bootstrap_iqr(mn_l, master_seed + 2);
    report.tn_small = median_with_bootstrap_iqr(tn_s, master_seed + 3);
    report.tn_large = median_with_bootstrap_iqr(tn_l, master_seed + 4);
    report.mn_ratio = report.mn_large.value / report.mn_small.value;
    report.tn_ratio = report.tn_large.value / report.tn_small.value;

    switch (kind) {
        case DivergenceKind::lrd:
            report.pass = report.mn_large.value > report.mn_small.value;
            break;
        case DivergenceKind::changepoint: {
            const double target =
                std::sqrt(static_cast<double>(n_large) / static_cast<double>(n_small));
            report.pass = report.tn_ratio >= 0.65 * target && report.tn_ratio <= 1.35 * target;
            break;
        }
        case DivergenceKind::iid:
            report.pass = report.tn_ratio >= 0.8 && report.tn_ratio <= 1.25;
            break;
    }
    return report;
}

}  // namespace lrcp
