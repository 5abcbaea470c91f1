#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "lrcp/rng.hpp"
#include "lrcp/series.hpp"

namespace lrcp {

/// Independent standard-normal draws scaled by sd.
struct IidNormalSpec {
    double sd = 1.0;
};

/// One-sided moving average X_k = sum_j a_j eps_{k-j} with iid standard
/// normal innovations; coeffs holds a_0..a_p.
struct LinearMaSpec {
    std::vector<double> coeffs{1.0};
};

/// Fractionally integrated noise (1-L)^(-d) eps, 0 < d < 1/2, realized as a
/// moving average truncated at `truncation` lags. truncation = 0 picks the
/// default max(5000, 5n).
struct FarimaSpec {
    double d = 0.25;
    std::size_t truncation = 0;
};

/// GARCH(p, q): r_k = sigma_k eps_k, sigma_k^2 = omega + sum_i alpha_i
/// r_{k-i}^2 + sum_j beta_j sigma_{k-j}^2. Requires omega > 0, nonnegative
/// coefficients and sum(alpha) + sum(beta) < 1.
struct GarchSpec {
    double omega = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::size_t burnin = 1000;
};

/// Linear ARCH: r_k = sigma_k eps_k, sigma_k = a + sum_{j>=1} b_j r_{k-j}.
/// Coefficients come either from the recursion b_j = b_{j-1}(j+d)/(j+1)
/// seeded with b0 (set `coeffs` empty), or are supplied explicitly.
struct LarchSpec {
    double a = 0.03;
    double b0 = 0.25;
    double d = 0.35;
    std::size_t truncation = 2000;  // J, number of lags kept
    std::size_t burnin = 5000;
    std::vector<double> coeffs;  // optional explicit b_1..b_J
};

/// Exact fractional Gaussian noise with Hurst index H in [1/2, 1).
struct FgnSpec {
    double hurst = 0.75;
};

using ProcessSpec =
    std::variant<IidNormalSpec, LinearMaSpec, FarimaSpec, GarchSpec, LarchSpec, FgnSpec>;

/// Mean-shift model on top of stationary innovations: X_i = mu + Y_i for
/// i <= floor(n * theta) and X_i = mu + delta + Y_i afterwards.
struct ChangePointModelSpec {
    double theta = 0.5;  // break fraction in (0, 1)
    double mu = 0.0;
    double delta = 0.0;
    ProcessSpec innovation = IidNormalSpec{};
};

/// Returns whose conditional-variance dynamics switch between two GARCH
/// parameter sets at floor(n * theta); the two stretches are generated
/// independently from the same stream.
struct TwoRegimeGarchSpec {
    GarchSpec before;
    GarchSpec after;
    double theta = 0.5;
};

// --- coefficient oracles ---------------------------------------------------

/// MA(inf) coefficients of (1-L)^(-d): a_0 = 1, a_j = a_{j-1} (j-1+d)/j,
/// returned for j = 0..truncation.
[[nodiscard]] std::vector<double> farima_coefficients(double d, std::size_t truncation);

/// Variance omitted by truncating the FARIMA moving average at M lags,
/// roughly a_M^2 * M / (1 - 2d).
[[nodiscard]] double farima_truncation_tail_variance(double d, std::size_t truncation);

/// LARCH coefficients b_1..b_J from the recursion b_j = b_{j-1}(j+d)/(j+1).
[[nodiscard]] std::vector<double> larch_coefficients(double b0, double d, std::size_t count);

/// Fourth-moment gate L * sqrt(E eps^4) * sum b_j^2 with L = 7 and Gaussian
/// innovations (E eps^4 = 3); fourth-order stationarity of the squares is
/// guaranteed when this is below 1. Values above 1 are reported as a
/// warning, not an error.
[[nodiscard]] double larch_moment_gate(const LarchSpec& spec);

/// Resolved b_1..b_J for a LARCH spec (explicit coefficients or recursion).
[[nodiscard]] std::vector<double> larch_resolved_coefficients(const LarchSpec& spec);

/// Autocovariance at lag j of the moving average with the given
/// coefficients and unit innovation variance: sum_k a_k a_{k+j}.
[[nodiscard]] double linear_autocovariance(std::span<const double> coeffs, std::size_t lag);

/// Autocovariance of fractional Gaussian noise with gamma_0 = 1:
/// ((j+1)^(2H) - 2 j^(2H) + |j-1|^(2H)) / 2. Accepts H in [1/2, 1).
[[nodiscard]] double fgn_autocovariance(double hurst, std::size_t lag);

// --- generators --------------------------------------------------------------

[[nodiscard]] Series simulate_iid_normal(const IidNormalSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] Series simulate_linear(const LinearMaSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] Series simulate_linear(const FarimaSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] Series simulate_garch(const GarchSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] Series simulate_larch(const LarchSpec& spec, std::size_t n, Rng& rng);
[[nodiscard]] Series simulate_two_regime_garch(const TwoRegimeGarchSpec& spec, std::size_t n,
                                               Rng& rng);
[[nodiscard]] Series simulate_changepoint(const ChangePointModelSpec& spec, std::size_t n,
                                          Rng& rng);

/// Exact fGn sampler: the Toeplitz covariance is factored once through the
/// Levinson recursion (innovations form of its Cholesky factor) and each
/// path is generated sequentially in O(n^2) time and O(n) memory. Throws
/// FactorizationError if the covariance fails to be positive definite.
class FgnSampler {
public:
    FgnSampler(double hurst, std::size_t n);

    [[nodiscard]] std::vector<double> sample(Rng& rng) const;
    [[nodiscard]] double hurst() const noexcept { return hurst_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }

private:
    double hurst_;
    std::size_t n_;
    bool trivial_;                // H = 1/2: iid path
    std::vector<double> kappa_;   // reflection coefficients
    std::vector<double> sigma_;   // conditional standard deviations
};

/// One exact fGn path. The cap guards the O(n^2) path cost; raise it
/// deliberately for larger runs.
[[nodiscard]] Series simulate_fgn(double hurst, std::size_t n, Rng& rng,
                                  std::size_t cap = 4096);

/// Dispatch over the process variants.
[[nodiscard]] Series simulate(const ProcessSpec& spec, std::size_t n, Rng& rng);

/// Validates spec parameters, throwing InputError with the offending field
/// named. Called by every generator; exposed for configuration loaders.
void validate(const ProcessSpec& spec);
void validate(const ChangePointModelSpec& spec);
void validate(const TwoRegimeGarchSpec& spec);

}  // namespace lrcp
