#include "lrcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lrcp/errors.hpp"

namespace lrcp {

namespace {

constexpr std::size_t kDefaultFarimaFloor = 5000;

std::size_t resolved_farima_truncation(const FarimaSpec& spec, std::size_t n) {
    if (spec.truncation > 0) {
        return spec.truncation;
    }
    return std::max<std::size_t>(kDefaultFarimaFloor, 5 * n);
}

std::vector<double> normal_draws(std::size_t count, Rng& rng) {
    std::vector<double> z(count);
    for (double& v : z) {
        v = rng.normal();
    }
    return z;
}

Series convolve_one_sided(const std::vector<double>& coeffs, std::size_t n, Rng& rng) {
    // eps_{1-L}..eps_n; X_k uses the L innovations before its start, which
    // doubles as the burn-in.
    const std::size_t lags = coeffs.size() - 1;
    const std::vector<double> eps = normal_draws(n + lags, rng);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        const double* e = eps.data() + k;  // eps[k + lags - j] for j = lags..0
        for (std::size_t j = 0; j <= lags; ++j) {
            acc += coeffs[j] * e[lags - j];
        }
        x[k] = acc;
    }
    return Series(std::move(x));
}

}  // namespace

// --- validation --------------------------------------------------------------

void validate(const ProcessSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidNormalSpec>) {
                if (!(s.sd > 0.0)) {
                    throw InputError("iid_normal.sd: must be positive");
                }
            } else if constexpr (std::is_same_v<T, LinearMaSpec>) {
                if (s.coeffs.empty()) {
                    throw InputError("linear_ma.coeffs: must be nonempty");
                }
                for (double c : s.coeffs) {
                    if (!std::isfinite(c)) {
                        throw InputError("linear_ma.coeffs: values must be finite");
                    }
                }
            } else if constexpr (std::is_same_v<T, FarimaSpec>) {
                if (!(s.d > 0.0 && s.d < 0.5)) {
                    throw InputError("farima.d: must lie in (0, 1/2)");
                }
            } else if constexpr (std::is_same_v<T, GarchSpec>) {
                if (!(s.omega > 0.0)) {
                    throw InputError("garch.omega: must be positive");
                }
                double total = 0.0;
                for (std::size_t i = 0; i < s.alpha.size(); ++i) {
                    if (s.alpha[i] < 0.0) {
                        throw InputError("garch.alpha[" + std::to_string(i) +
                                         "]: must be nonnegative");
                    }
                    total += s.alpha[i];
                }
                for (std::size_t j = 0; j < s.beta.size(); ++j) {
                    if (s.beta[j] < 0.0) {
                        throw InputError("garch.beta[" + std::to_string(j) +
                                         "]: must be nonnegative");
                    }
                    total += s.beta[j];
                }
                if (!(total < 1.0)) {
                    throw InputError(
                        "garch: sum(alpha) + sum(beta) must be below 1 for stationarity");
                }
            } else if constexpr (std::is_same_v<T, LarchSpec>) {
                if (s.a == 0.0) {
                    throw InputError("larch.a: must be nonzero");
                }
                if (s.coeffs.empty() && !(s.d > 0.0 && s.d < 0.5)) {
                    throw InputError("larch.d: must lie in (0, 1/2)");
                }
                if (s.coeffs.empty() && s.truncation < 1) {
                    throw InputError("larch.truncation: must be at least 1");
                }
            } else if constexpr (std::is_same_v<T, FgnSpec>) {
                if (!(s.hurst >= 0.5 && s.hurst < 1.0)) {
                    throw InputError("fgn.hurst: must lie in [1/2, 1)");
                }
            }
        },
        spec);
}

void validate(const ChangePointModelSpec& spec) {
    if (!(spec.theta > 0.0 && spec.theta < 1.0)) {
        throw InputError("changepoint.theta: must lie in (0, 1)");
    }
    if (!std::isfinite(spec.mu) || !std::isfinite(spec.delta)) {
        throw InputError("changepoint: mu and delta must be finite");
    }
    validate(spec.innovation);
}

void validate(const TwoRegimeGarchSpec& spec) {
    if (!(spec.theta > 0.0 && spec.theta < 1.0)) {
        throw InputError("two_regime_garch.theta: must lie in (0, 1)");
    }
    validate(ProcessSpec{spec.before});
    validate(ProcessSpec{spec.after});
}

// --- coefficient oracles ------------------------------------------------------

std::vector<double> farima_coefficients(double d, std::size_t truncation) {
    if (!(d > 0.0 && d < 0.5)) {
        throw InputError("farima_coefficients: d must lie in (0, 1/2)");
    }
    std::vector<double> a(truncation + 1);
    a[0] = 1.0;
    for (std::size_t j = 1; j <= truncation; ++j) {
        a[j] = a[j - 1] * (static_cast<double>(j) - 1.0 + d) / static_cast<double>(j);
    }
    return a;
}

double farima_truncation_tail_variance(double d, std::size_t truncation) {
    if (!(d > 0.0 && d < 0.5) || truncation == 0) {
        throw InputError("farima_truncation_tail_variance: invalid parameters");
    }
    // a_M ~ M^(d-1)/Gamma(d); integrate the squared tail.
    const double am = std::exp(std::lgamma(static_cast<double>(truncation) + d) -
                               std::lgamma(d) -
                               std::lgamma(static_cast<double>(truncation) + 1.0));
    return am * am * static_cast<double>(truncation) / (1.0 - 2.0 * d);
}

std::vector<double> larch_coefficients(double b0, double d, std::size_t count) {
    if (!(d > 0.0 && d < 0.5)) {
        throw InputError("larch_coefficients: d must lie in (0, 1/2)");
    }
    if (count < 1) {
        throw InputError("larch_coefficients: count must be at least 1");
    }
    std::vector<double> b(count);
    double prev = b0;
    for (std::size_t j = 1; j <= count; ++j) {
        prev = prev * (static_cast<double>(j) + d) / (static_cast<double>(j) + 1.0);
        b[j - 1] = prev;
    }
    return b;
}

std::vector<double> larch_resolved_coefficients(const LarchSpec& spec) {
    if (!spec.coeffs.empty()) {
        return spec.coeffs;
    }
    return larch_coefficients(spec.b0, spec.d, spec.truncation);
}

double larch_moment_gate(const LarchSpec& spec) {
    const std::vector<double> b = larch_resolved_coefficients(spec);
    double ss = 0.0;
    for (double bj : b) {
        ss += bj * bj;
    }
    return 7.0 * std::sqrt(3.0) * ss;
}

double linear_autocovariance(std::span<const double> coeffs, std::size_t lag) {
    if (lag >= coeffs.size()) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k + lag < coeffs.size(); ++k) {
        acc += coeffs[k] * coeffs[k + lag];
    }
    return acc;
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    if (!(hurst >= 0.5 && hurst < 1.0)) {
        throw InputError("fgn_autocovariance: Hurst index must lie in [1/2, 1)");
    }
    if (lag == 0) {
        return 1.0;
    }
    const double j = static_cast<double>(lag);
    const double two_h = 2.0 * hurst;
    return 0.5 * (std::pow(j + 1.0, two_h) - 2.0 * std::pow(j, two_h) +
                  std::pow(j - 1.0, two_h));
}

// --- generators ----------------------------------------------------------------

Series simulate_iid_normal(const IidNormalSpec& spec, std::size_t n, Rng& rng) {
    validate(ProcessSpec{spec});
    std::vector<double> x(n);
    for (double& v : x) {
        v = spec.sd * rng.normal();
    }
    return Series(std::move(x));
}

Series simulate_linear(const LinearMaSpec& spec, std::size_t n, Rng& rng) {
    validate(ProcessSpec{spec});
    return convolve_one_sided(spec.coeffs, n, rng);
}

Series simulate_linear(const FarimaSpec& spec, std::size_t n, Rng& rng) {
    validate(ProcessSpec{spec});
    const std::size_t m = resolved_farima_truncation(spec, n);
    return convolve_one_sided(farima_coefficients(spec.d, m), n, rng);
}

Series simulate_garch(const GarchSpec& spec, std::size_t n, Rng& rng) {
    validate(ProcessSpec{spec});
    const std::size_t p = spec.alpha.size();
    const std::size_t q = spec.beta.size();
    double coef_sum = 0.0;
    coef_sum += std::accumulate(spec.alpha.begin(), spec.alpha.end(), 0.0);
    coef_sum += std::accumulate(spec.beta.begin(), spec.beta.end(), 0.0);
    const double unconditional = spec.omega / (1.0 - coef_sum);

    const std::size_t total = spec.burnin + n;
    const std::size_t hist = std::max<std::size_t>(std::max(p, q), 1);
    // r2[i], sig2[i] for i < hist hold the stationary starting state.
    std::vector<double> r2(hist + total, unconditional);
    std::vector<double> sig2(hist + total, unconditional);
    std::vector<double> r(total);
    for (std::size_t k = 0; k < total; ++k) {
        const std::size_t i = hist + k;
        double s2 = spec.omega;
        for (std::size_t a = 0; a < p; ++a) {
            s2 += spec.alpha[a] * r2[i - 1 - a];
        }
        for (std::size_t b = 0; b < q; ++b) {
            s2 += spec.beta[b] * sig2[i - 1 - b];
        }
        sig2[i] = s2;
        const double rk = std::sqrt(s2) * rng.normal();
        r[k] = rk;
        r2[i] = rk * rk;
    }
    return Series(std::vector<double>(r.begin() + static_cast<std::ptrdiff_t>(spec.burnin),
                                      r.end()));
}

Series simulate_larch(const LarchSpec& spec, std::size_t n, Rng& rng) {
    validate(ProcessSpec{spec});
    const std::vector<double> b = larch_resolved_coefficients(spec);
    const std::size_t lags = b.size();
    const std::size_t total = spec.burnin + n;
    // r[i] for i < lags is the zero pre-history, so the first sigma is a.
    std::vector<double> r(lags + total, 0.0);
    for (std::size_t k = 0; k < total; ++k) {
        const std::size_t i = lags + k;
        double sigma = spec.a;
        const double* past = r.data() + i;
        for (std::size_t j = 1; j <= lags; ++j) {
            sigma += b[j - 1] * past[-static_cast<std::ptrdiff_t>(j)];
        }
        r[i] = sigma * rng.normal();
    }
    return Series(std::vector<double>(r.begin() + static_cast<std::ptrdiff_t>(lags + spec.burnin),
                                      r.end()));
}

Series simulate_two_regime_garch(const TwoRegimeGarchSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    const std::size_t k_star =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.theta));
    if (k_star == 0 || k_star >= n) {
        throw InputError("two_regime_garch: break fraction leaves an empty regime");
    }
    const Series first = simulate_garch(spec.before, k_star, rng);
    const Series second = simulate_garch(spec.after, n - k_star, rng);
    std::vector<double> x;
    x.reserve(n);
    x.insert(x.end(), first.values().begin(), first.values().end());
    x.insert(x.end(), second.values().begin(), second.values().end());
    return Series(std::move(x));
}

Series simulate_changepoint(const ChangePointModelSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    const Series innovations = simulate(spec.innovation, n, rng);
    const std::size_t k_star =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.theta));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = spec.mu + innovations[i] + (i >= k_star ? spec.delta : 0.0);
    }
    return Series(std::move(x));
}

FgnSampler::FgnSampler(double hurst, std::size_t n)
    : hurst_(hurst), n_(n), trivial_(hurst == 0.5) {
    if (!(hurst >= 0.5 && hurst < 1.0)) {
        throw InputError("FgnSampler: Hurst index must lie in [1/2, 1)");
    }
    if (n == 0) {
        throw InputError("FgnSampler: n must be positive");
    }
    sigma_.assign(n, 1.0);
    if (trivial_ || n == 1) {
        kappa_.assign(n > 0 ? n - 1 : 0, 0.0);
        return;
    }

    std::vector<double> gamma(n);
    for (std::size_t j = 0; j < n; ++j) {
        gamma[j] = fgn_autocovariance(hurst, j);
    }

    // Levinson recursion on the Toeplitz covariance: reflection coefficients
    // and conditional variances; row holds the current predictor.
    kappa_.assign(n - 1, 0.0);
    std::vector<double> row(n - 1, 0.0);
    double v = gamma[0];
    sigma_[0] = std::sqrt(v);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = gamma[k];
        for (std::size_t j = 1; j < k; ++j) {
            acc -= row[j - 1] * gamma[k - j];
        }
        const double kap = acc / v;
        kappa_[k - 1] = kap;

        for (std::size_t j = 1; 2 * j < k; ++j) {
            const double lo = row[j - 1];
            const double hi = row[k - 1 - j];
            row[j - 1] = lo - kap * hi;
            row[k - 1 - j] = hi - kap * lo;
        }
        if (k >= 2 && k % 2 == 0) {
            row[k / 2 - 1] *= (1.0 - kap);
        }
        row[k - 1] = kap;

        v *= (1.0 - kap * kap);
        if (!(v > 0.0)) {
            throw FactorizationError(
                "FgnSampler: covariance is not positive definite at step " +
                std::to_string(k));
        }
        sigma_[k] = std::sqrt(v);
    }
}

std::vector<double> FgnSampler::sample(Rng& rng) const {
    std::vector<double> x(n_);
    if (trivial_) {
        for (double& v : x) {
            v = rng.normal();
        }
        return x;
    }
    x[0] = sigma_[0] * rng.normal();
    std::vector<double> row(n_ - 1, 0.0);
    for (std::size_t k = 1; k < n_; ++k) {
        const double kap = kappa_[k - 1];
        for (std::size_t j = 1; 2 * j < k; ++j) {
            const double lo = row[j - 1];
            const double hi = row[k - 1 - j];
            row[j - 1] = lo - kap * hi;
            row[k - 1 - j] = hi - kap * lo;
        }
        if (k >= 2 && k % 2 == 0) {
            row[k / 2 - 1] *= (1.0 - kap);
        }
        row[k - 1] = kap;

        double mean = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            mean += row[j - 1] * x[k - j];
        }
        x[k] = mean + sigma_[k] * rng.normal();
    }
    return x;
}

Series simulate_fgn(double hurst, std::size_t n, Rng& rng, std::size_t cap) {
    if (n > cap) {
        throw InputError("simulate_fgn: n = " + std::to_string(n) +
                         " exceeds the exact-sampler cap " + std::to_string(cap) +
                         "; raise the cap deliberately for larger runs");
    }
    return Series(FgnSampler(hurst, n).sample(rng));
}

Series simulate(const ProcessSpec& spec, std::size_t n, Rng& rng) {
    return std::visit(
        [&](const auto& s) -> Series {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidNormalSpec>) {
                return simulate_iid_normal(s, n, rng);
            } else if constexpr (std::is_same_v<T, LinearMaSpec>) {
                return simulate_linear(s, n, rng);
            } else if constexpr (std::is_same_v<T, FarimaSpec>) {
                return simulate_linear(s, n, rng);
            } else if constexpr (std::is_same_v<T, GarchSpec>) {
                return simulate_garch(s, n, rng);
            } else if constexpr (std::is_same_v<T, LarchSpec>) {
                return simulate_larch(s, n, rng);
            } else {
                return simulate_fgn(s.hurst, n, rng,
                                    std::max<std::size_t>(n, 4096));
            }
        },
        spec);
}

}  // namespace lrcp
