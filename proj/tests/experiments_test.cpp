#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrcp/errors.hpp"
#include "lrcp/experiments.hpp"
#include "lrcp/stats.hpp"

using namespace lrcp;

TEST_CASE("order statistics helpers") {
    std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
    CHECK(median(v) == 3.0);
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 5.0);
    CHECK(quantile(v, 0.5) == 3.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK_THROWS_AS((void)quantile({}, 0.5), InputError);

    const MedianSummary ms = median_with_bootstrap_iqr({1, 2, 3, 4, 5, 6, 7, 8}, 1);
    CHECK(ms.boot_iqr_lo <= ms.value);
    CHECK(ms.value <= ms.boot_iqr_hi);
}

TEST_CASE("rejection table") {
    McConfig cfg;
    cfg.replications = 100;
    cfg.n = 500;
    cfg.alphas = {0.10, 0.05};
    cfg.model = ProcessSpec{IidNormalSpec{}};
    cfg.statistic = McStatistic::full_tn;
    cfg.master_seed = 11;

    const RejectionTable t = rejection_table(cfg);
    REQUIRE(t.rejection_rate.size() == 2);
    CHECK(t.failures == 0);
    CHECK(t.critical_values[0] == doctest::Approx(critical_value(1, 0.10).value));

    SUBCASE("deterministic given the master seed") {
        const RejectionTable again = rejection_table(cfg);
        CHECK(again.rejection_rate == t.rejection_rate);
        CHECK(again.std_error == t.std_error);
    }

    SUBCASE("rates respond to the level and errors carry the binomial form") {
        CHECK(t.rejection_rate[0] >= t.rejection_rate[1]);
        for (std::size_t i = 0; i < 2; ++i) {
            const double p = t.rejection_rate[i];
            CHECK(t.std_error[i] == doctest::Approx(std::sqrt(p * (1 - p) / 100.0)));
        }
    }

    SUBCASE("failed replications are counted, not fatal") {
        McConfig degenerate = cfg;
        degenerate.n = 60;
        degenerate.statistic = McStatistic::split_mn;
        // iid with sd tiny: fine; instead force failures with a model whose
        // khat often hugs the boundary: a strong spike at the start.
        ChangePointModelSpec cp;
        cp.theta = 0.03;  // break lands inside min_seg for many draws
        cp.delta = 50.0;
        degenerate.model = cp;
        degenerate.n = 200;
        const RejectionTable d = rejection_table(degenerate);
        CHECK(d.failures > 0);
        CHECK(d.failures < d.replications);
    }

    CHECK_THROWS_AS((void)rejection_table(McConfig{.replications = 0}), InputError);
}

TEST_CASE("benchmark models carry the fitted parameters") {
    const TwoRegimeGarchSpec size_model = benchmark_size_model();
    CHECK(size_model.before.omega == doctest::Approx(0.02461474));
    CHECK(size_model.before.alpha[0] == doctest::Approx(0.06404848));
    CHECK(size_model.before.beta[0] == doctest::Approx(0.87864088));
    CHECK(size_model.after.omega == doctest::Approx(0.09540076));
    CHECK(size_model.after.alpha[0] == doctest::Approx(0.09734341));
    CHECK(size_model.after.beta[0] == doctest::Approx(0.83945713));
    CHECK(static_cast<std::size_t>(std::floor(2021 * size_model.theta)) == 1061);

    const LarchSpec power_model = benchmark_power_model();
    CHECK(power_model.a == 0.03);
    CHECK(power_model.b0 == 0.25);
    CHECK(power_model.d == 0.35);
}

TEST_CASE("bartlett consistency harness") {
    SUBCASE("iid converges to 1") {
        const std::vector<std::size_t> grid{20000};
        const ConsistencyReport r = bartlett_consistency(
            ProcessSpec{IidNormalSpec{}}, grid, BandwidthRule{}, 50, 3);
        CHECK_FALSE(r.lrd);
        CHECK(r.points[0].target == 1.0);
        CHECK(r.points[0].ratio == doctest::Approx(1.0).epsilon(0.05));
        CHECK(r.points[0].boot_iqr_lo <= r.points[0].statistic);
        CHECK(r.points[0].statistic <= r.points[0].boot_iqr_hi);
    }

    SUBCASE("moving-average target is the squared coefficient sum") {
        LinearMaSpec ma;
        ma.coeffs = {1.0, 1.0};
        const std::vector<std::size_t> grid{20000};
        const ConsistencyReport r =
            bartlett_consistency(ProcessSpec{ma}, grid, BandwidthRule{}, 50, 4);
        CHECK(r.points[0].target == doctest::Approx(4.0));
        CHECK(r.points[0].ratio == doctest::Approx(1.0).epsilon(0.1));
    }

    SUBCASE("the LRD branch rescales by q^(1-2H) and fits c0 from the oracle") {
        const std::vector<std::size_t> grid{1024};
        const ConsistencyReport r = bartlett_consistency(
            ProcessSpec{FgnSpec{0.85}}, grid, BandwidthRule{}, 30, 5);
        CHECK(r.lrd);
        CHECK(r.hurst == 0.85);
        CHECK(r.points[0].target == doctest::Approx(1.0).epsilon(1e-3));
        // downward finite-sample bias is expected; the value must be sane
        CHECK(r.points[0].statistic > 0.4);
        CHECK(r.points[0].statistic < 1.3);
    }
}

TEST_CASE("limit functional samples") {
    SUBCASE("H = 1/2: argmax location is symmetric around one half") {
        const auto samples = limit_functional_samples(0.5, 2048, 2000, 51);
        double xi_mean = 0.0;
        for (const auto& s : samples) {
            xi_mean += s.xi;
        }
        xi_mean /= static_cast<double>(samples.size());
        CHECK(xi_mean == doctest::Approx(0.5).epsilon(0.03 / 0.5));
    }

    SUBCASE("H = 1/2: the first component looks like a bridge supremum") {
        const auto samples = limit_functional_samples(0.5, 1024, 500, 91);
        std::vector<double> v1;
        for (const auto& s : samples) {
            v1.push_back(s.v1);
        }
        CHECK(median(v1) == doctest::Approx(bridge_sup_quantile(0.5)).epsilon(0.05));
    }

    SUBCASE("H = 0.85: argmax is interior and the components sit below the null law") {
        const auto samples = limit_functional_samples(0.85, 1024, 1000, 52);
        std::vector<double> v1;
        std::size_t interior = 0;
        for (const auto& s : samples) {
            CHECK(s.xi > 0.0);
            CHECK(s.xi <= 1.0);
            interior += !s.boundary;
            v1.push_back(s.v1);
        }
        CHECK(interior == samples.size());
        // The positively correlated path hugs its chord: the limit components
        // are an order of magnitude below the Brownian-bridge null at every
        // decile (the test's power against LRD comes from the (n/q)^(H-1/2)
        // divergence, not from these laws).
        for (int d = 1; d <= 9; ++d) {
            const double p = d / 10.0;
            CHECK(quantile(v1, p) < bridge_sup_quantile(p));
        }
        CHECK(median(v1) == doctest::Approx(0.19).epsilon(0.25));
    }
}

TEST_CASE("divergence check on iid input is flat") {
    const DivergenceReport r =
        divergence_check(ProcessSpec{IidNormalSpec{}}, 500, 2000, 60, DivergenceKind::iid,
                         McTransform::none, BandwidthRule{}, 33);
    CHECK(r.pass);
    CHECK(r.tn_ratio > 0.8);
    CHECK(r.tn_ratio < 1.25);
    CHECK(r.failures == 0);
    CHECK(r.mn_small.boot_iqr_lo <= r.mn_small.value);
}
