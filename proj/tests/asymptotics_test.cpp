#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrcp/asymptotics.hpp"
#include "lrcp/errors.hpp"

using namespace lrcp;

namespace {

// The two classical series for P(sup|B| <= x), evaluated independently of
// the implementation: the theta-dual form (fast for small x) and the
// alternating form (fast for large x). Each one cross-checks the region
// where the implementation uses the other.
double bridge_sup_cdf_dual(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (int k = 1; k < 2000; k += 2) {
        const double term =
            std::exp(-static_cast<double>(k) * k * std::numbers::pi * std::numbers::pi /
                     (8.0 * x * x));
        sum += term;
        if (term < 1e-16 * sum) {
            break;
        }
    }
    return std::sqrt(2.0 * std::numbers::pi) / x * sum;
}

double bridge_sup_cdf_alternating(double x) {
    double sum = 0.0;
    double sign = -1.0;
    for (int k = 1; k < 2000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) {
            break;
        }
    }
    return 1.0 + 2.0 * sum;
}

}  // namespace

TEST_CASE("bridge supremum cdf") {
    CHECK(bridge_sup_cdf(0.0) == 0.0);
    CHECK(bridge_sup_cdf(1.3581) == doctest::Approx(0.95).epsilon(1e-3));
    CHECK(bridge_sup_cdf(1.36) == doctest::Approx(0.9505).epsilon(1e-3));

    SUBCASE("the two series representations check each other across regions") {
        for (double x = 1.0; x <= 3.0; x += 0.0173) {
            CHECK(bridge_sup_cdf(x) == doctest::Approx(bridge_sup_cdf_dual(x)).epsilon(1e-10));
        }
        for (double x = 0.4; x < 1.0; x += 0.0123) {
            CHECK(bridge_sup_cdf(x) ==
                  doctest::Approx(bridge_sup_cdf_alternating(x)).epsilon(1e-9));
        }
        // branch crossover is seamless
        CHECK(bridge_sup_cdf(std::nextafter(1.0, 0.0)) ==
              doctest::Approx(bridge_sup_cdf(1.0)).epsilon(1e-12));
    }

    SUBCASE("nondecreasing with values in [0,1] on a fine grid") {
        double prev = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double x = 4.0 * static_cast<double>(i) / 10000.0;
            const double c = bridge_sup_cdf(x);
            CHECK(c >= prev);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            prev = c;
        }
        CHECK(bridge_sup_cdf(4.0) == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS((void)bridge_sup_cdf(-0.1), InputError);
}

TEST_CASE("bridge supremum quantile") {
    CHECK(bridge_sup_quantile(bridge_sup_cdf(1.5)) == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(bridge_sup_quantile(0.95) == doctest::Approx(1.358).epsilon(1e-3));
    CHECK(bridge_sup_quantile(0.99) > bridge_sup_quantile(0.95));

    SUBCASE("round trips across the usable range") {
        for (double p = 0.01; p <= 0.999; p += 0.0107) {
            CHECK(bridge_sup_cdf(bridge_sup_quantile(p)) == doctest::Approx(p).epsilon(1e-7));
        }
    }

    CHECK_THROWS_AS((void)bridge_sup_quantile(0.0), InputError);
    CHECK_THROWS_AS((void)bridge_sup_quantile(1.0), InputError);
}

TEST_CASE("critical values match the published anchors") {
    CHECK(critical_value(2, 0.10).value == doctest::Approx(1.36).epsilon(0.01 / 1.36));
    CHECK(critical_value(2, 0.05).value == doctest::Approx(1.48).epsilon(0.01 / 1.48));
    CHECK(critical_value(2, 0.01).value == doctest::Approx(1.72).epsilon(0.02 / 1.72));

    SUBCASE("definitional consistency and monotonicity") {
        for (double alpha : {0.10, 0.05, 0.01}) {
            CHECK(critical_value(1, alpha).value == bridge_sup_quantile(1.0 - alpha));
            double prev = 0.0;
            for (std::size_t u = 1; u <= 6; ++u) {
                const double c = critical_value(u, alpha).value;
                CHECK(c > prev);
                prev = c;
                // CDF(value)^u == 1 - alpha
                CHECK(std::pow(bridge_sup_cdf(c), static_cast<double>(u)) ==
                      doctest::Approx(1.0 - alpha).epsilon(1e-6));
            }
        }
        for (std::size_t u : {1u, 2u, 4u}) {
            CHECK(critical_value(u, 0.01).value > critical_value(u, 0.05).value);
            CHECK(critical_value(u, 0.05).value > critical_value(u, 0.10).value);
        }
    }

    CHECK_THROWS_AS((void)critical_value(0, 0.05), InputError);
    CHECK_THROWS_AS((void)critical_value(2, 1.5), InputError);
}

TEST_CASE("default bandwidth") {
    CHECK(default_bandwidth(2021).q == 49);  // floor(15 log10 2021)
    CHECK(default_bandwidth(2021).clamped == false);

    BandwidthRule c10;
    c10.multiplier = 10.0;
    const BandwidthResult r10 = default_bandwidth(10, c10);
    CHECK(r10.q == 8);  // raw 10 clamped to n - 2
    CHECK(r10.clamped);
    CHECK(default_bandwidth(100, c10).q == 20);

    CHECK(default_bandwidth(2).q >= 0);
    CHECK_THROWS_AS((void)default_bandwidth(1), InputError);
}

TEST_CASE("bandwidth rule validation") {
    const std::size_t n_max = 1u << 24;

    SUBCASE("the c log10 family passes, with or without the LRD check") {
        for (double c : {1.0, 5.0, 15.0, 50.0}) {
            BandwidthRule rule;
            rule.multiplier = c;
            const BandwidthCheckReport r = validate_bandwidth_rule(rule, 0.85, n_max);
            CHECK(r.nondecreasing);
            CHECK(r.doubling_bounded);
            CHECK(r.growth_ok);
            REQUIRE(r.lrd_growth_ok.has_value());
            CHECK(*r.lrd_growth_ok);
            CHECK(r.all_pass());
        }
    }

    SUBCASE("the identity rule fails the growth condition") {
        BandwidthRule identity;
        identity.form = BandwidthRule::Form::c_power;
        identity.multiplier = 1.0;
        identity.exponent = 1.0;
        const BandwidthCheckReport r = validate_bandwidth_rule(identity, std::nullopt, n_max);
        CHECK(r.nondecreasing);
        CHECK_FALSE(r.growth_ok);
        CHECK_FALSE(r.all_pass());
    }

    SUBCASE("sqrt(n) satisfies the weak-dependence condition but fails the LRD one") {
        BandwidthRule root;
        root.form = BandwidthRule::Form::c_power;
        root.multiplier = 1.0;
        root.exponent = 0.5;
        const BandwidthCheckReport r = validate_bandwidth_rule(root, 0.9, n_max);
        CHECK(r.growth_ok);
        REQUIRE(r.lrd_growth_ok.has_value());
        CHECK_FALSE(*r.lrd_growth_ok);
        CHECK_FALSE(r.all_pass());
    }

    CHECK_THROWS_AS((void)validate_bandwidth_rule(BandwidthRule{}, std::nullopt, 2), InputError);
}
