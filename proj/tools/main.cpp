// Command-line front end: test, segment, simulate, mc, diag, bandwidth-check.
//
// Exit codes: 0 on success (any verdict), 1 on input errors, 2 on
// computation errors (zero variance, segments too short).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrcp/errors.hpp"
#include "lrcp/io.hpp"
#include "lrcp/segmentation.hpp"
#include "lrcp/simulate.hpp"
#include "lrcp/stats.hpp"

namespace {

struct CommonOptions {
    std::string pipeline_text = "levels";
    std::string column;
    double alpha = 0.05;
    double bandwidth_mult = 15.0;
    std::size_t min_seg = 20;
    std::string format = "text";
    std::string out;
};

void add_io_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--pipeline", opt.pipeline_text,
                    "input kind and transforms, e.g. prices,log_returns_pct,demean,square");
    cmd->add_option("--column", opt.column, "CSV column (name or 0-based index)");
    cmd->add_option("--format", opt.format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--out", opt.out, "write the structured report to this file");
}

lrcp::Pipeline make_pipeline(const CommonOptions& opt) {
    lrcp::Pipeline p = lrcp::Pipeline::parse(opt.pipeline_text);
    if (!opt.column.empty()) {
        p.column = opt.column;
    }
    return p;
}

std::string default_report_path(const std::string& name) {
    const char* dir = std::getenv("LRCP_REPORT_DIR");
    if (dir == nullptr || *dir == '\0') {
        return {};
    }
    return std::string(dir) + "/" + name + ".json";
}

void emit_report(const nlohmann::json& report, const CommonOptions& opt) {
    std::string out_path = opt.out;
    if (out_path.empty()) {
        out_path = default_report_path(report.value("command", "report"));
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            throw lrcp::InputError("cannot open report file: " + out_path);
        }
        out << report.dump(2) << '\n';
    }
    if (opt.format == "structured") {
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << lrcp::render_text(report);
    }
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw lrcp::InputError("cannot open file: " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw lrcp::InputError("cannot parse JSON in " + path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CUSUM-based discrimination between mean change points and "
                 "long-range dependence"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string input_path;

    // test
    auto* cmd_test = app.add_subcommand(
        "test", "split the series at the estimated change point and test M_n");
    cmd_test->add_option("input", input_path, "input CSV or single-column file")->required();
    cmd_test->add_option("--alpha", opt.alpha, "test level (default 0.05)");
    cmd_test->add_option("--bandwidth-mult", opt.bandwidth_mult,
                         "multiplier c in q(n) = floor(c log10 n)");
    cmd_test->add_option("--min-seg", opt.min_seg, "minimum segment length");
    add_io_options(cmd_test, opt);

    // segment
    std::size_t max_changes = 2;
    auto* cmd_segment =
        app.add_subcommand("segment", "multistage binary segmentation with c(u) gates");
    cmd_segment->add_option("input", input_path)->required();
    cmd_segment->add_option("--alpha", opt.alpha, "test level (default 0.05)");
    cmd_segment->add_option("--max-changes", max_changes, "largest number of mean changes");
    cmd_segment->add_option("--bandwidth-mult", opt.bandwidth_mult,
                            "multiplier c in q(n) = floor(c log10 n)");
    cmd_segment->add_option("--min-seg", opt.min_seg, "minimum segment length");
    add_io_options(cmd_segment, opt);

    // simulate
    std::string spec_path;
    std::size_t sim_n = 1000;
    std::uint64_t seed = 0;
    std::size_t fgn_cap = 4096;
    auto* cmd_sim = app.add_subcommand("simulate", "generate a series from a model spec");
    cmd_sim->add_option("--spec", spec_path, "JSON model spec")->required();
    cmd_sim->add_option("--n", sim_n, "series length")->required();
    cmd_sim->add_option("--seed", seed, "seed (default 0)");
    cmd_sim->add_option("--fgn-cap", fgn_cap, "cap for the exact fGn sampler");
    cmd_sim->add_option("--out", opt.out, "output file, one value per line")->required();

    // mc
    std::string mc_config_path;
    std::string preset;
    std::size_t override_reps = 0;
    std::uint64_t override_seed = 0;
    bool seed_given = false;
    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo rejection table");
    cmd_mc->add_option("--config", mc_config_path, "JSON Monte Carlo configuration");
    cmd_mc->add_option("--preset", preset, "size-benchmark or power-benchmark")
        ->check(CLI::IsMember({"size-benchmark", "power-benchmark"}));
    cmd_mc->add_option("--replications", override_reps, "override replication count");
    cmd_mc->add_option("--seed", override_seed, "override master seed")
        ->each([&](const std::string&) { seed_given = true; });
    cmd_mc->add_option("--format", opt.format)->check(CLI::IsMember({"text", "structured"}));
    cmd_mc->add_option("--out", opt.out, "write the structured report to this file");

    // diag
    std::size_t max_lag = 100;
    std::size_t window = 21;
    auto* cmd_diag = app.add_subcommand("diag", "ACF and periodogram diagnostics");
    cmd_diag->add_option("input", input_path)->required();
    cmd_diag->add_option("--max-lag", max_lag, "largest autocorrelation lag");
    cmd_diag->add_option("--smoothing-window", window, "odd periodogram smoothing window");
    add_io_options(cmd_diag, opt);

    // bandwidth-check
    std::string bw_form = "c_log10";
    double bw_exponent = 0.5;
    double hurst = 0.0;
    std::size_t n_max = 1u << 24;
    auto* cmd_bw = app.add_subcommand("bandwidth-check",
                                      "validate a bandwidth rule's growth conditions");
    cmd_bw->add_option("--bandwidth-mult", opt.bandwidth_mult, "multiplier c");
    cmd_bw->add_option("--form", bw_form)->check(CLI::IsMember({"c_log10", "c_power"}));
    cmd_bw->add_option("--exponent", bw_exponent, "exponent for the c_power form");
    cmd_bw->add_option("--hurst", hurst, "check the long-range-dependence condition at this H");
    cmd_bw->add_option("--n-max", n_max, "top of the doubling grid");
    cmd_bw->add_option("--format", opt.format)->check(CLI::IsMember({"text", "structured"}));
    cmd_bw->add_option("--out", opt.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        lrcp::BandwidthRule bandwidth;
        bandwidth.multiplier = opt.bandwidth_mult;

        if (cmd_test->parsed()) {
            const lrcp::Pipeline pipeline = make_pipeline(opt);
            const lrcp::Series series = lrcp::load_series(input_path, pipeline);
            emit_report(lrcp::run_test_report(series, pipeline, opt.alpha, bandwidth,
                                              opt.min_seg, input_path),
                        opt);
        } else if (cmd_segment->parsed()) {
            const lrcp::Pipeline pipeline = make_pipeline(opt);
            const lrcp::Series series = lrcp::load_series(input_path, pipeline);
            emit_report(lrcp::run_segmentation_report(series, pipeline, opt.alpha, max_changes,
                                                      bandwidth, opt.min_seg, input_path),
                        opt);
        } else if (cmd_sim->parsed()) {
            const nlohmann::json spec_json = load_json_file(spec_path);
            const lrcp::McModel model = lrcp::parse_model(spec_json);
            lrcp::Rng rng(seed);

            if (const auto* p = std::get_if<lrcp::ProcessSpec>(&model)) {
                if (const auto* fgn = std::get_if<lrcp::FgnSpec>(p); fgn && sim_n > fgn_cap) {
                    throw lrcp::InputError(
                        "simulate: n exceeds the exact fGn cap; raise --fgn-cap deliberately");
                }
                if (const auto* larch = std::get_if<lrcp::LarchSpec>(p)) {
                    const double gate = lrcp::larch_moment_gate(*larch);
                    if (gate >= 1.0) {
                        std::cerr << "warning: LARCH fourth-moment gate = "
                                  << lrcp::format_double(gate)
                                  << " >= 1; fourth-order stationarity of the squares is "
                                     "not guaranteed\n";
                    }
                }
            }
            const lrcp::Series series = lrcp::simulate_model(
                model, sim_n, lrcp::McTransform::none, rng);

            nlohmann::json meta{{"schema_version", lrcp::kReportSchemaVersion},
                                {"tool", {{"name", lrcp::kToolName},
                                          {"version", lrcp::kToolVersion}}},
                                {"command", "simulate"},
                                {"model", lrcp::model_to_json(model)},
                                {"n", sim_n},
                                {"seed", seed}};
            if (const auto* p = std::get_if<lrcp::ProcessSpec>(&model)) {
                if (const auto* farima = std::get_if<lrcp::FarimaSpec>(p)) {
                    const std::size_t m = farima->truncation > 0
                                              ? farima->truncation
                                              : std::max<std::size_t>(5000, 5 * sim_n);
                    meta["farima_truncation"] = m;
                    meta["farima_tail_variance"] =
                        lrcp::farima_truncation_tail_variance(farima->d, m);
                }
                if (const auto* larch = std::get_if<lrcp::LarchSpec>(p)) {
                    meta["larch_moment_gate"] = lrcp::larch_moment_gate(*larch);
                }
            }
            lrcp::write_series_file(opt.out, series.values(), meta);
        } else if (cmd_mc->parsed()) {
            lrcp::McConfig config;
            if (!preset.empty()) {
                config.n = 2021;
                config.replications = 300;
                config.transform = lrcp::McTransform::square;
                config.statistic = lrcp::McStatistic::split_mn;
                config.master_seed = 20060301;
                config.model = preset == "size-benchmark"
                                   ? lrcp::McModel(lrcp::benchmark_size_model())
                                   : lrcp::McModel(lrcp::ProcessSpec(
                                         lrcp::benchmark_power_model()));
            } else if (!mc_config_path.empty()) {
                config = lrcp::parse_mc_config(load_json_file(mc_config_path));
            } else {
                throw lrcp::InputError("mc: provide --config or --preset");
            }
            if (override_reps > 0) {
                config.replications = override_reps;
            }
            if (seed_given) {
                config.master_seed = override_seed;
            }
            const lrcp::RejectionTable table = lrcp::rejection_table(config);
            emit_report(lrcp::rejection_table_report(config, table), opt);
        } else if (cmd_diag->parsed()) {
            const lrcp::Pipeline pipeline = make_pipeline(opt);
            const lrcp::Series series = lrcp::load_series(input_path, pipeline);
            emit_report(lrcp::diagnostics_report(series, max_lag, window), opt);
        } else if (cmd_bw->parsed()) {
            lrcp::BandwidthRule rule;
            rule.multiplier = opt.bandwidth_mult;
            rule.form = bw_form == "c_power" ? lrcp::BandwidthRule::Form::c_power
                                             : lrcp::BandwidthRule::Form::c_log10;
            rule.exponent = bw_exponent;
            const std::optional<double> h =
                hurst > 0.0 ? std::optional<double>(hurst) : std::nullopt;
            const lrcp::BandwidthCheckReport report =
                lrcp::validate_bandwidth_rule(rule, h, n_max);
            emit_report(lrcp::bandwidth_check_report(rule, report, h), opt);
        }
    } catch (const lrcp::ComputationError& e) {
        nlohmann::json err{{"error", {{"kind", "computation"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 2;
    } catch (const lrcp::InputError& e) {
        nlohmann::json err{{"error", {{"kind", "input"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
