#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lrcp/errors.hpp"
#include "lrcp/io.hpp"
#include "lrcp/rng.hpp"
#include "lrcp/simulate.hpp"
#include "lrcp/stats.hpp"

using namespace lrcp;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        std::filesystem::remove(path + ".meta.json", ec);
    }
    void write(const std::string& content) const {
        std::ofstream out(path);
        out << content;
    }
};

}  // namespace

TEST_CASE("pipeline parsing and validation") {
    const Pipeline p = Pipeline::parse("prices,log_returns_pct,demean,square");
    CHECK(p.input_kind == InputKind::prices);
    REQUIRE(p.transforms.size() == 3);
    CHECK(p.to_string() == "prices,log_returns_pct,demean,square");

    CHECK(Pipeline::parse("").transforms.empty());
    CHECK(Pipeline::parse("demean").input_kind == InputKind::levels);

    CHECK_THROWS_AS((void)Pipeline::parse("prices,square"), InputError);
    CHECK_THROWS_AS((void)Pipeline::parse("levels,nonsense"), InputError);
    // squaring levels directly is allowed
    CHECK(Pipeline::parse("levels,square").transforms.size() == 1);
}

TEST_CASE("transforms") {
    SUBCASE("log returns in percent") {
        Pipeline p = Pipeline::parse("prices,log_returns_pct");
        const std::vector<double> out = apply_transforms({100.0, 101.0}, p);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == doctest::Approx(100.0 * std::log(1.01)).epsilon(1e-12));
        CHECK(out[0] == doctest::Approx(0.99503).epsilon(1e-4));
    }
    SUBCASE("demean") {
        Pipeline p = Pipeline::parse("levels,demean");
        const std::vector<double> out = apply_transforms({1.0, 2.0, 3.0}, p);
        CHECK(out == std::vector<double>{-1.0, 0.0, 1.0});
    }
    SUBCASE("order matters and errors are specific") {
        Pipeline p1 = Pipeline::parse("levels,demean,square");
        Pipeline p2 = Pipeline::parse("levels,square,demean");
        const std::vector<double> in{1.0, 2.0, 3.0};
        CHECK(apply_transforms(in, p1) != apply_transforms(in, p2));

        Pipeline returns = Pipeline::parse("prices,log_returns_pct");
        CHECK_THROWS_AS((void)apply_transforms({3.0}, returns), InputError);
        CHECK_THROWS_AS((void)apply_transforms({3.0, -1.0}, returns), InputError);
    }
}

TEST_CASE("csv loading") {
    SUBCASE("plain single column") {
        TempFile f("lrcp_io_plain.txt");
        f.write("1.5\n2.5\n-3.5\n");
        const Series s = load_series(f.path, Pipeline{});
        REQUIRE(s.size() == 3);
        CHECK(s[2] == -3.5);
    }

    SUBCASE("header detection and named column") {
        TempFile f("lrcp_io_named.csv");
        f.write("date,close\n1992-01-02,3172.4\n1992-01-03,3201.5\n");
        Pipeline p;
        p.column = "close";
        const Series s = load_series(f.path, p);
        REQUIRE(s.size() == 2);
        CHECK(s[0] == doctest::Approx(3172.4));
    }

    SUBCASE("column by index") {
        TempFile f("lrcp_io_indexed.csv");
        f.write("10,1\n20,2\n30,3\n");
        Pipeline p;
        p.column = "1";
        const Series s = load_series(f.path, p);
        CHECK(s[2] == 3.0);
    }

    SUBCASE("parse errors carry the line number") {
        TempFile f("lrcp_io_bad.csv");
        f.write("1.0\nnot_a_number\n3.0\n");
        try {
            (void)load_series(f.path, Pipeline{});
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    SUBCASE("missing column and empty file") {
        TempFile f("lrcp_io_short.csv");
        f.write("1.0\n2.0\n");
        Pipeline p;
        p.column = "3";
        CHECK_THROWS_AS((void)load_series(f.path, p), InputError);
        CHECK_THROWS_AS((void)load_series("/nonexistent/file.csv", Pipeline{}), InputError);
    }
}

TEST_CASE("series files round-trip at full precision") {
    TempFile f("lrcp_io_roundtrip.txt");
    Rng rng(17);
    std::vector<double> values(257);
    for (double& v : values) {
        v = rng.normal() * 1e3;
    }
    values[0] = 0.1 + 0.2;  // not exactly representable as printed
    write_series_file(f.path, values, nlohmann::json{{"note", "test"}});

    const Series back = read_series_file(f.path);
    REQUIRE(back.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(back[i] == values[i]);  // bit identical
    }
    CHECK(std::filesystem::exists(f.path + ".meta.json"));
}

TEST_CASE("test report: complete, numeric and text views agree") {
    Rng rng(23);
    std::vector<double> x(600);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = (i >= 300 ? 4.0 : 0.0) + rng.normal();
    }
    const Series series{std::move(x)};
    const Pipeline pipeline = Pipeline::parse("levels");
    const nlohmann::json report =
        run_test_report(series, pipeline, 0.05, BandwidthRule{}, 20, "mem");

    CHECK(report["n"] == 600);
    CHECK(report["statistics"].contains("khat"));
    CHECK(report["statistics"]["mn"].get<double>() ==
          std::max(report["statistics"]["t1"].get<double>(),
                   report["statistics"]["t2"].get<double>()));
    CHECK(report["test"]["critical_value"].get<double>() == doctest::Approx(1.4785).epsilon(1e-3));

    SUBCASE("every statistic shown in the text view comes from the report") {
        const std::string text = render_text(report);
        for (const char* key : {"khat", "T1", "T2", "Mn", "verdict"}) {
            CHECK(text.find(key) != std::string::npos);
        }
        CHECK(text.find(format_double(report["statistics"]["mn"].get<double>())) !=
              std::string::npos);
        CHECK(text.find(report["test"]["verdict"].get<std::string>()) != std::string::npos);
    }

    SUBCASE("statistics reproduce when recomputed from the report's inputs") {
        const SplitTestResult again = split_statistics(series, BandwidthRule{}, 20);
        CHECK(report["statistics"]["mn"].get<double>() == again.mn);
        CHECK(report["statistics"]["khat"].get<std::size_t>() == again.khat);
    }
}

TEST_CASE("segmentation report carries the full trace") {
    Rng rng(29);
    std::vector<double> x(900);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = (i >= 450 ? 6.0 : 0.0) + rng.normal();
    }
    BandwidthRule narrow;
    narrow.multiplier = 5.0;
    const nlohmann::json report = run_segmentation_report(
        Series{std::move(x)}, Pipeline{}, 0.05, 2, narrow, 20, "mem");
    CHECK(report["verdict"] == "weakly_dependent");
    CHECK(report["changepoints"].size() == 1);
    REQUIRE(report["trace"].size() >= 2);
    CHECK(report["trace"][0]["exceeded"] == true);
    CHECK(report["trace"][0]["decision"] == "split");
    const std::string text = render_text(report);
    CHECK(text.find("stage 1") != std::string::npos);
}

TEST_CASE("diagnostics report") {
    SUBCASE("white noise stays inside the Bartlett bands") {
        Rng rng(31);
        std::vector<double> x(10000);
        for (double& v : x) {
            v = rng.normal();
        }
        const nlohmann::json rep = diagnostics_report(Series{std::move(x)}, 50, 21);
        CHECK(rep["degenerate"] == false);
        const double band = 3.0 / std::sqrt(10000.0);
        std::size_t inside = 0;
        for (std::size_t lag = 1; lag <= 50; ++lag) {
            const double acf = rep["acf"][lag]["acf"].get<double>();
            inside += std::abs(acf) <= band;
        }
        CHECK(inside >= 49);  // >= 99% of coefficients random-seeded
        CHECK(rep["acf"][0]["acf"] == 1.0);
        // periodogram columns are present and finite at low frequencies
        CHECK(rep["periodogram"][0]["freq"].get<double>() ==
              doctest::Approx(2.0 * 3.14159265358979 / 10000.0));
        CHECK(rep["periodogram"][0]["smoothed"].get<double>() > 0.0);
    }

    SUBCASE("constant input is flagged degenerate with zero ACF") {
        const nlohmann::json rep = diagnostics_report(Series{std::vector<double>(64, 5.0)}, 10, 5);
        CHECK(rep["degenerate"] == true);
        for (std::size_t lag = 1; lag <= 10; ++lag) {
            CHECK(rep["acf"][lag]["acf"] == 0.0);
        }
    }

    SUBCASE("long-memory input shows the low-frequency spectral slope") {
        Rng rng(71);
        const Series x = simulate_linear(FarimaSpec{0.35, 20000}, 10000, rng);
        const nlohmann::json rep = diagnostics_report(x, 10, 21);
        const auto& rows = rep["periodogram"];
        const std::size_t lowest = rows.size() / 20;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lowest; ++i) {
            const double lx = rows[i]["log10_freq"].get<double>();
            const double ly = rows[i]["log10_smoothed"].get<double>();
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double m = static_cast<double>(lowest);
        const double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
        CHECK(slope == doctest::Approx(-0.7).epsilon(0.2 / 0.7));
    }

    CHECK_THROWS_AS((void)diagnostics_report(Series{std::vector<double>(10, 1.0)}, 10, 5),
                    InputError);
    CHECK_THROWS_AS((void)diagnostics_report(Series{std::vector<double>(10, 1.0)}, 3, 4),
                    InputError);
}

TEST_CASE("model specs round-trip through json") {
    const auto roundtrip = [](const nlohmann::json& j) {
        return model_to_json(parse_model(j));
    };

    const nlohmann::json garch{{"type", "garch"},
                               {"omega", 0.02461474},
                               {"alpha", {0.06404848}},
                               {"beta", {0.87864088}}};
    CHECK(roundtrip(garch)["omega"] == 0.02461474);

    const nlohmann::json larch{
        {"type", "larch"}, {"a", 0.03}, {"b0", 0.25}, {"d", 0.35}, {"truncation", 2000}};
    CHECK(roundtrip(larch)["b0"] == 0.25);

    const nlohmann::json cp{{"type", "changepoint"},
                            {"theta", 0.5},
                            {"delta", 1.0},
                            {"innovation", {{"type", "iid_normal"}, {"sd", 2.0}}}};
    CHECK(roundtrip(cp)["innovation"]["sd"] == 2.0);

    const nlohmann::json two{{"type", "two_regime_garch"},
                             {"theta", 0.525},
                             {"before", garch},
                             {"after", garch}};
    CHECK(roundtrip(two)["before"]["omega"] == 0.02461474);

    SUBCASE("validation errors name the offending field") {
        try {
            (void)parse_model(nlohmann::json{{"type", "garch"},
                                             {"omega", 0.1},
                                             {"alpha", {0.5}},
                                             {"beta", {0.6}}});
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("sum(alpha) + sum(beta)") != std::string::npos);
        }
        try {
            (void)parse_model(nlohmann::json{{"type", "farima"}});
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("farima") != std::string::npos);
            CHECK(std::string(e.what()).find("d") != std::string::npos);
        }
        CHECK_THROWS_AS((void)parse_model(nlohmann::json{{"type", "mystery"}}), InputError);
    }
}

TEST_CASE("mc config parsing") {
    const nlohmann::json cfg{{"model", {{"type", "iid_normal"}}},
                             {"n", 500},
                             {"replications", 50},
                             {"alphas", {0.1}},
                             {"statistic", "full_tn"},
                             {"transform", "none"},
                             {"master_seed", 7}};
    const McConfig mc = parse_mc_config(cfg);
    CHECK(mc.n == 500);
    CHECK(mc.replications == 50);
    CHECK(mc.statistic == McStatistic::full_tn);
    CHECK(mc.master_seed == 7);

    nlohmann::json bad = cfg;
    bad["transform"] = "cube";
    CHECK_THROWS_AS((void)parse_mc_config(bad), InputError);
    nlohmann::json missing = cfg;
    missing.erase("model");
    CHECK_THROWS_AS((void)parse_mc_config(missing), InputError);
}
