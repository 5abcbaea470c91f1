#include "lrcp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lrcp/errors.hpp"
#include "lrcp/segmentation.hpp"
#include "lrcp/stats.hpp"

namespace lrcp {

namespace {

std::optional<double> parse_number(std::string_view token) {
    // Trim surrounding whitespace and quotes.
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '"'; };
    while (!token.empty() && is_space(token.front())) {
        token.remove_prefix(1);
    }
    while (!token.empty() && is_space(token.back())) {
        token.remove_suffix(1);
    }
    if (token.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

Transform transform_from_string(const std::string& name) {
    if (name == "log_returns_pct") return Transform::log_returns_pct;
    if (name == "simple_returns_pct") return Transform::simple_returns_pct;
    if (name == "demean") return Transform::demean;
    if (name == "square") return Transform::square;
    throw InputError("pipeline: unknown transform '" + name + "'");
}

std::string transform_to_string(Transform t) {
    switch (t) {
        case Transform::log_returns_pct: return "log_returns_pct";
        case Transform::simple_returns_pct: return "simple_returns_pct";
        case Transform::demean: return "demean";
        case Transform::square: return "square";
    }
    return "unknown";
}

nlohmann::json tool_header(const std::string& command) {
    return {{"schema_version", kReportSchemaVersion},
            {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
            {"command", command}};
}

nlohmann::json pipeline_to_json(const Pipeline& p) {
    nlohmann::json transforms = nlohmann::json::array();
    for (Transform t : p.transforms) {
        transforms.push_back(transform_to_string(t));
    }
    nlohmann::json j{{"input_kind", p.input_kind == InputKind::prices ? "prices" : "levels"},
                     {"transforms", transforms}};
    if (p.column) {
        j["column"] = *p.column;
    }
    return j;
}

nlohmann::json bandwidth_to_json(const BandwidthRule& rule) {
    nlohmann::json j{{"multiplier", rule.multiplier}};
    if (rule.form == BandwidthRule::Form::c_log10) {
        j["form"] = "c_log10";
    } else {
        j["form"] = "c_power";
        j["exponent"] = rule.exponent;
    }
    return j;
}

}  // namespace

Pipeline Pipeline::parse(const std::string& text) {
    Pipeline p;
    if (text.empty()) {
        return p;
    }
    std::stringstream ss(text);
    std::string token;
    bool first = true;
    while (std::getline(ss, token, ',')) {
        if (first && (token == "levels" || token == "prices")) {
            p.input_kind = token == "prices" ? InputKind::prices : InputKind::levels;
            first = false;
            continue;
        }
        first = false;
        if (token.empty()) {
            continue;
        }
        p.transforms.push_back(transform_from_string(token));
    }
    p.validate();
    return p;
}

std::string Pipeline::to_string() const {
    std::string out = input_kind == InputKind::prices ? "prices" : "levels";
    for (Transform t : transforms) {
        out += "," + transform_to_string(t);
    }
    return out;
}

void Pipeline::validate() const {
    if (input_kind == InputKind::prices) {
        bool scaled = false;  // true once a returns or demean step has run
        for (Transform t : transforms) {
            if (t == Transform::log_returns_pct || t == Transform::simple_returns_pct ||
                t == Transform::demean) {
                scaled = true;
            } else if (t == Transform::square && !scaled) {
                throw InputError(
                    "pipeline: 'square' on price input requires a returns or demean "
                    "step first");
            }
        }
    }
}

std::vector<double> apply_transforms(std::vector<double> values, const Pipeline& pipeline) {
    pipeline.validate();
    for (Transform t : pipeline.transforms) {
        switch (t) {
            case Transform::log_returns_pct:
            case Transform::simple_returns_pct: {
                if (values.size() < 2) {
                    throw InputError("pipeline: returns need at least 2 rows");
                }
                std::vector<double> returns(values.size() - 1);
                for (std::size_t i = 1; i < values.size(); ++i) {
                    if (t == Transform::log_returns_pct) {
                        if (!(values[i] > 0.0 && values[i - 1] > 0.0)) {
                            throw InputError("pipeline: log returns need positive prices (row " +
                                             std::to_string(i + 1) + ")");
                        }
                        returns[i - 1] = 100.0 * std::log(values[i] / values[i - 1]);
                    } else {
                        if (values[i - 1] == 0.0) {
                            throw InputError("pipeline: simple returns hit a zero price (row " +
                                             std::to_string(i) + ")");
                        }
                        returns[i - 1] = 100.0 * (values[i] / values[i - 1] - 1.0);
                    }
                }
                values = std::move(returns);
                break;
            }
            case Transform::demean: {
                if (values.empty()) {
                    throw InputError("pipeline: demean on empty series");
                }
                const double mean =
                    compensated_total(values) / static_cast<double>(values.size());
                for (double& v : values) {
                    v -= mean;
                }
                break;
            }
            case Transform::square:
                for (double& v : values) {
                    v *= v;
                }
                break;
        }
    }
    return values;
}

Series load_series(const std::string& path, const Pipeline& pipeline) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file: " + path);
    }

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        // Skip blank lines.
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        lines.push_back(line);
    }
    if (lines.empty()) {
        throw InputError("input file is empty: " + path);
    }

    const std::vector<std::string> first_fields = split_csv_line(lines[0]);
    bool has_header = false;
    for (const std::string& f : first_fields) {
        if (!parse_number(f).has_value()) {
            has_header = true;
            break;
        }
    }

    std::size_t column_index = 0;
    if (pipeline.column) {
        const std::string& sel = *pipeline.column;
        if (auto idx = parse_number(sel); idx && *idx == std::floor(*idx) && *idx >= 0) {
            column_index = static_cast<std::size_t>(*idx);
        } else if (has_header) {
            const auto it = std::find(first_fields.begin(), first_fields.end(), sel);
            if (it == first_fields.end()) {
                throw InputError("column '" + sel + "' not found in header");
            }
            column_index = static_cast<std::size_t>(it - first_fields.begin());
        } else {
            throw InputError("column '" + sel + "' requested but the file has no header");
        }
    }

    std::vector<double> values;
    values.reserve(lines.size());
    for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_csv_line(lines[i]);
        if (column_index >= fields.size()) {
            throw InputError("line " + std::to_string(i + 1) + ": only " +
                             std::to_string(fields.size()) + " column(s), needed " +
                             std::to_string(column_index + 1));
        }
        const std::optional<double> v = parse_number(fields[column_index]);
        if (!v || !std::isfinite(*v)) {
            throw InputError("line " + std::to_string(i + 1) + ": cannot parse '" +
                             fields[column_index] + "' as a finite number");
        }
        values.push_back(*v);
    }
    if (values.empty()) {
        throw InputError("no data rows in " + path);
    }
    return Series(apply_transforms(std::move(values), pipeline));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_series_file(const std::string& path, std::span<const double> values,
                       const nlohmann::json& sidecar_metadata) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot open output file: " + path);
    }
    for (double v : values) {
        out << format_double(v) << '\n';
    }
    out.close();

    std::ofstream meta(path + ".meta.json");
    if (!meta) {
        throw InputError("cannot open sidecar file: " + path + ".meta.json");
    }
    meta << sidecar_metadata.dump(2) << '\n';
}

Series read_series_file(const std::string& path) {
    return load_series(path, Pipeline{});
}

nlohmann::json run_test_report(const Series& series, const Pipeline& pipeline, double alpha,
                               const BandwidthRule& bandwidth, std::size_t min_seg,
                               const std::string& input_path) {
    const SplitTestResult r = split_statistics(series, bandwidth, min_seg);
    const double c2 = critical_value(2, alpha).value;
    const bool reject = r.mn > c2;

    nlohmann::json report = tool_header("test");
    report["input"] = {{"path", input_path}, {"pipeline", pipeline_to_json(pipeline)}};
    report["n"] = series.size();
    report["bandwidth"] = bandwidth_to_json(bandwidth);
    report["min_seg"] = min_seg;
    report["statistics"] = {{"khat", r.khat}, {"t1", r.t1},   {"t2", r.t2}, {"s1", r.s1},
                            {"s2", r.s2},     {"mn", r.mn},   {"q1", r.q1}, {"q2", r.q2},
                            {"q_full", bandwidth(series.size())}};
    report["test"] = {{"alpha", alpha},
                      {"critical_value", c2},
                      {"reject", reject},
                      {"verdict", reject ? "long_range_dependence_indicated"
                                         : "change_point_model_not_rejected"}};
    return report;
}

nlohmann::json run_segmentation_report(const Series& series, const Pipeline& pipeline,
                                       double alpha, std::size_t max_changes,
                                       const BandwidthRule& bandwidth, std::size_t min_seg,
                                       const std::string& input_path) {
    const SegmentationResult r =
        multistage_classify(series, max_changes, alpha, bandwidth, min_seg);

    nlohmann::json trace = nlohmann::json::array();
    for (const StageRecord& s : r.trace) {
        nlohmann::json entry{{"stage", s.stage},       {"m_hat", s.m_hat},
                             {"critical", s.critical}, {"exceeded", s.exceeded},
                             {"decision", to_string(s.decision)}};
        if (s.decision == StageDecision::split) {
            entry["split"] = {{"lo", s.split_lo}, {"hi", s.split_hi}, {"at", s.split_at}};
        }
        if (!s.note.empty()) {
            entry["note"] = s.note;
        }
        trace.push_back(entry);
    }

    nlohmann::json segments = nlohmann::json::array();
    for (const SegmentTest& s : r.segments) {
        segments.push_back({{"lo", s.lo},
                            {"hi", s.hi},
                            {"t_stat", s.t_stat},
                            {"khat", s.khat},
                            {"q", s.q_used}});
    }

    nlohmann::json report = tool_header("segment");
    report["input"] = {{"path", input_path}, {"pipeline", pipeline_to_json(pipeline)}};
    report["n"] = series.size();
    report["bandwidth"] = bandwidth_to_json(bandwidth);
    report["min_seg"] = min_seg;
    report["alpha"] = alpha;
    report["max_changes"] = max_changes;
    report["verdict"] = to_string(r.verdict);
    report["changepoints"] = r.changepoints;
    report["trace"] = trace;
    report["segments"] = segments;
    report["exhausted_by_min_seg"] = r.exhausted_by_min_seg;
    report["degenerate"] = r.degenerate;
    report["stats_evaluated"] = r.stats_evaluated;
    return report;
}

nlohmann::json diagnostics_report(const Series& series, std::size_t max_lag,
                                  std::size_t smoothing_window) {
    const std::size_t n = series.size();
    if (max_lag >= n) {
        throw InputError("diagnostics: max_lag must be below n");
    }
    if (smoothing_window % 2 == 0 || smoothing_window == 0) {
        throw InputError("diagnostics: smoothing window must be odd");
    }

    const double gamma0 = sample_autocovariance(series, 0);
    const bool degenerate = gamma0 <= 0.0;

    nlohmann::json lags = nlohmann::json::array();
    for (std::size_t j = 0; j <= max_lag; ++j) {
        const double acf =
            degenerate ? 0.0 : sample_autocovariance(series, j) / gamma0;  // 0/0 -> 0
        lags.push_back({{"lag", j}, {"acf", acf}});
    }

    // Raw periodogram at the Fourier frequencies, by rotation recurrence.
    const std::size_t half = n / 2;
    std::vector<double> raw(half);
    const std::span<const double> x = series.values();
    for (std::size_t j = 1; j <= half; ++j) {
        const double lambda = 2.0 * std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(n);
        const double c = std::cos(lambda);
        const double s = std::sin(lambda);
        double cr = 1.0, ci = 0.0;  // e^{-i t lambda}, t = 0
        double sum_re = 0.0, sum_im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double nr = cr * c + ci * s;  // multiply by e^{-i lambda}
            const double ni = ci * c - cr * s;
            cr = nr;
            ci = ni;
            sum_re += x[t] * cr;
            sum_im += x[t] * ci;
        }
        raw[j - 1] = (sum_re * sum_re + sum_im * sum_im) /
                     (2.0 * std::numbers::pi * static_cast<double>(n));
    }

    // Centered moving average, window truncated at the edges.
    const std::size_t hw = smoothing_window / 2;
    nlohmann::json freqs = nlohmann::json::array();
    for (std::size_t j = 1; j <= half; ++j) {
        const std::size_t lo = j > hw + 1 ? j - hw : 1;
        const std::size_t hi = std::min(half, j + hw);
        double acc = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) {
            acc += raw[k - 1];
        }
        const double smooth = acc / static_cast<double>(hi - lo + 1);
        const double lambda = 2.0 * std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(n);
        nlohmann::json row{{"freq", lambda},
                           {"periodogram", raw[j - 1]},
                           {"smoothed", smooth},
                           {"log10_freq", std::log10(lambda)}};
        row["log10_periodogram"] =
            raw[j - 1] > 0.0 ? nlohmann::json(std::log10(raw[j - 1])) : nlohmann::json();
        row["log10_smoothed"] =
            smooth > 0.0 ? nlohmann::json(std::log10(smooth)) : nlohmann::json();
        freqs.push_back(row);
    }

    nlohmann::json report = tool_header("diag");
    report["n"] = n;
    report["max_lag"] = max_lag;
    report["smoothing_window"] = smoothing_window;
    report["degenerate"] = degenerate;
    report["acf"] = lags;
    report["periodogram"] = freqs;
    return report;
}

nlohmann::json rejection_table_report(const McConfig& config, const RejectionTable& table) {
    nlohmann::json model = model_to_json(config.model);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.alphas.size(); ++i) {
        rows.push_back({{"alpha", table.alphas[i]},
                        {"critical_value", table.critical_values[i]},
                        {"rejection_rate", table.rejection_rate[i]},
                        {"std_error", table.std_error[i]}});
    }
    nlohmann::json report = tool_header("mc");
    report["model"] = model;
    report["transform"] = config.transform == McTransform::square ? "square" : "none";
    report["statistic"] = config.statistic == McStatistic::split_mn ? "split_mn" : "full_tn";
    report["n"] = table.n;
    report["replications"] = table.replications;
    report["failures"] = table.failures;
    report["master_seed"] = table.master_seed;
    report["bandwidth"] = bandwidth_to_json(config.bandwidth);
    report["innovations"] = "standard_normal";
    report["levels"] = rows;
    return report;
}

nlohmann::json bandwidth_check_report(const BandwidthRule& rule,
                                      const BandwidthCheckReport& report,
                                      std::optional<double> hurst) {
    nlohmann::json j = tool_header("bandwidth-check");
    j["rule"] = bandwidth_to_json(rule);
    j["grid"] = report.grid;
    j["q_values"] = report.q_values;
    j["checks"] = {{"nondecreasing", report.nondecreasing},
                   {"doubling_bounded", report.doubling_bounded},
                   {"growth_ok", report.growth_ok}};
    j["max_doubling_ratio"] = report.max_doubling_ratio;
    if (hurst) {
        j["hurst"] = *hurst;
        j["checks"]["lrd_growth_ok"] = report.lrd_growth_ok.value_or(false);
    }
    j["all_pass"] = report.all_pass();
    return j;
}

std::string render_text(const nlohmann::json& report) {
    std::ostringstream out;
    const std::string command = report.value("command", "");
    const auto num = [](const nlohmann::json& v) {
        return format_double(v.get<double>());
    };

    if (command == "test") {
        const auto& s = report["statistics"];
        const auto& t = report["test"];
        out << "n                : " << report["n"].get<std::size_t>() << "\n"
            << "pipeline         : " << report["input"]["pipeline"]["input_kind"].get<std::string>();
        for (const auto& tr : report["input"]["pipeline"]["transforms"]) {
            out << "," << tr.get<std::string>();
        }
        out << "\n"
            << "khat             : " << s["khat"].get<std::size_t>() << "\n"
            << "T1               : " << num(s["t1"]) << "  (s1 = " << num(s["s1"])
            << ", q1 = " << s["q1"].get<std::size_t>() << ")\n"
            << "T2               : " << num(s["t2"]) << "  (s2 = " << num(s["s2"])
            << ", q2 = " << s["q2"].get<std::size_t>() << ")\n"
            << "Mn               : " << num(s["mn"]) << "\n"
            << "c(2, alpha=" << num(t["alpha"]) << ") : " << num(t["critical_value"]) << "\n"
            << "verdict          : " << t["verdict"].get<std::string>() << "\n";
    } else if (command == "segment") {
        out << "n            : " << report["n"].get<std::size_t>() << "\n"
            << "alpha        : " << num(report["alpha"]) << "\n"
            << "max changes  : " << report["max_changes"].get<std::size_t>() << "\n"
            << "verdict      : " << report["verdict"].get<std::string>() << "\n"
            << "changepoints :";
        for (const auto& cp : report["changepoints"]) {
            out << " " << cp.get<std::size_t>();
        }
        out << "\n" << "trace        :\n";
        for (const auto& e : report["trace"]) {
            out << "  stage " << e["stage"].get<std::size_t>() << ": max stat "
                << num(e["m_hat"]) << (e["exceeded"].get<bool>() ? " > " : " <= ") << "c = "
                << num(e["critical"]) << " -> " << e["decision"].get<std::string>();
            if (e.contains("split")) {
                out << " (" << e["split"]["lo"].get<std::size_t>() << ", "
                    << e["split"]["hi"].get<std::size_t>() << "] at "
                    << e["split"]["at"].get<std::size_t>();
            }
            out << "\n";
        }
    } else if (command == "mc") {
        out << "model        : " << report["model"]["type"].get<std::string>() << "\n"
            << "statistic    : " << report["statistic"].get<std::string>() << "\n"
            << "n            : " << report["n"].get<std::size_t>() << "\n"
            << "replications : " << report["replications"].get<std::size_t>() << "\n"
            << "failures     : " << report["failures"].get<std::size_t>() << "\n"
            << "seed         : " << report["master_seed"].get<std::uint64_t>() << "\n";
        for (const auto& row : report["levels"]) {
            out << "  alpha " << num(row["alpha"]) << ": reject "
                << num(row["rejection_rate"]) << " (se " << num(row["std_error"]) << ", c "
                << num(row["critical_value"]) << ")\n";
        }
    } else if (command == "bandwidth-check") {
        out << "rule        : " << report["rule"]["form"].get<std::string>() << " c = "
            << num(report["rule"]["multiplier"]) << "\n";
        for (const auto& [key, value] : report["checks"].items()) {
            out << "  " << key << " : " << (value.get<bool>() ? "pass" : "FAIL") << "\n";
        }
        out << "all pass    : " << (report["all_pass"].get<bool>() ? "yes" : "NO") << "\n";
    } else if (command == "diag") {
        out << "n " << report["n"].get<std::size_t>() << ", "
            << (report["degenerate"].get<bool>() ? "degenerate (constant input)\n" : "\n");
        out << "lag\tacf\n";
        for (const auto& row : report["acf"]) {
            out << row["lag"].get<std::size_t>() << "\t" << num(row["acf"]) << "\n";
        }
        out << "freq\tperiodogram\tsmoothed\n";
        for (const auto& row : report["periodogram"]) {
            out << num(row["freq"]) << "\t" << num(row["periodogram"]) << "\t"
                << num(row["smoothed"]) << "\n";
        }
    } else {
        out << report.dump(2) << "\n";
    }
    return out.str();
}

// --- configuration parsing -------------------------------------------------------

namespace {

double require_number(const nlohmann::json& j, const std::string& field,
                      const std::string& context) {
    if (!j.contains(field) || !j[field].is_number()) {
        throw InputError(context + "." + field + ": missing or not a number");
    }
    return j[field].get<double>();
}

std::vector<double> number_array(const nlohmann::json& j, const std::string& field,
                                 const std::string& context) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw InputError(context + "." + field + ": missing or not an array");
    }
    std::vector<double> out;
    for (const auto& v : j[field]) {
        if (!v.is_number()) {
            throw InputError(context + "." + field + ": entries must be numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

GarchSpec parse_garch(const nlohmann::json& j, const std::string& context) {
    GarchSpec g;
    g.omega = require_number(j, "omega", context);
    g.alpha = number_array(j, "alpha", context);
    g.beta = number_array(j, "beta", context);
    if (j.contains("burnin")) {
        g.burnin = j["burnin"].get<std::size_t>();
    }
    return g;
}

ProcessSpec parse_process(const nlohmann::json& j, const std::string& context) {
    if (!j.contains("type") || !j["type"].is_string()) {
        throw InputError(context + ".type: missing process type");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "iid_normal") {
        IidNormalSpec s;
        if (j.contains("sd")) {
            s.sd = require_number(j, "sd", context);
        }
        return s;
    }
    if (type == "linear_ma") {
        LinearMaSpec s;
        s.coeffs = number_array(j, "coeffs", context);
        return s;
    }
    if (type == "farima") {
        FarimaSpec s;
        s.d = require_number(j, "d", context);
        if (j.contains("truncation")) {
            s.truncation = j["truncation"].get<std::size_t>();
        }
        return s;
    }
    if (type == "garch") {
        return parse_garch(j, context);
    }
    if (type == "larch") {
        LarchSpec s;
        s.a = require_number(j, "a", context);
        if (j.contains("coeffs")) {
            s.coeffs = number_array(j, "coeffs", context);
        } else {
            s.b0 = require_number(j, "b0", context);
            s.d = require_number(j, "d", context);
        }
        if (j.contains("truncation")) {
            s.truncation = j["truncation"].get<std::size_t>();
        }
        if (j.contains("burnin")) {
            s.burnin = j["burnin"].get<std::size_t>();
        }
        return s;
    }
    if (type == "fgn") {
        FgnSpec s;
        s.hurst = require_number(j, "hurst", context);
        return s;
    }
    throw InputError(context + ".type: unknown process type '" + type + "'");
}

}  // namespace

McModel parse_model(const nlohmann::json& spec) {
    if (!spec.contains("type") || !spec["type"].is_string()) {
        throw InputError("model.type: missing");
    }
    const std::string type = spec["type"].get<std::string>();
    McModel model;
    if (type == "changepoint") {
        ChangePointModelSpec c;
        c.theta = require_number(spec, "theta", "changepoint");
        c.mu = spec.contains("mu") ? require_number(spec, "mu", "changepoint") : 0.0;
        c.delta = require_number(spec, "delta", "changepoint");
        if (!spec.contains("innovation")) {
            throw InputError("changepoint.innovation: missing");
        }
        c.innovation = parse_process(spec["innovation"], "changepoint.innovation");
        validate(c);
        model = c;
    } else if (type == "two_regime_garch") {
        TwoRegimeGarchSpec t;
        t.theta = require_number(spec, "theta", "two_regime_garch");
        if (!spec.contains("before") || !spec.contains("after")) {
            throw InputError("two_regime_garch: needs 'before' and 'after' blocks");
        }
        t.before = parse_garch(spec["before"], "two_regime_garch.before");
        t.after = parse_garch(spec["after"], "two_regime_garch.after");
        validate(t);
        model = t;
    } else {
        ProcessSpec p = parse_process(spec, "process");
        validate(p);
        model = p;
    }
    return model;
}

nlohmann::json model_to_json(const McModel& model) {
    const auto process_json = [](const ProcessSpec& p) -> nlohmann::json {
        return std::visit(
            [](const auto& s) -> nlohmann::json {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, IidNormalSpec>) {
                    return {{"type", "iid_normal"}, {"sd", s.sd}};
                } else if constexpr (std::is_same_v<T, LinearMaSpec>) {
                    return {{"type", "linear_ma"}, {"coeffs", s.coeffs}};
                } else if constexpr (std::is_same_v<T, FarimaSpec>) {
                    return {{"type", "farima"}, {"d", s.d}, {"truncation", s.truncation}};
                } else if constexpr (std::is_same_v<T, GarchSpec>) {
                    return {{"type", "garch"},
                            {"omega", s.omega},
                            {"alpha", s.alpha},
                            {"beta", s.beta},
                            {"burnin", s.burnin}};
                } else if constexpr (std::is_same_v<T, LarchSpec>) {
                    nlohmann::json j{{"type", "larch"},
                                     {"a", s.a},
                                     {"truncation", s.truncation},
                                     {"burnin", s.burnin}};
                    if (s.coeffs.empty()) {
                        j["b0"] = s.b0;
                        j["d"] = s.d;
                    } else {
                        j["coeffs"] = s.coeffs;
                    }
                    return j;
                } else {
                    return {{"type", "fgn"}, {"hurst", s.hurst}};
                }
            },
            p);
    };

    return std::visit(
        [&](const auto& m) -> nlohmann::json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProcessSpec>) {
                return process_json(m);
            } else if constexpr (std::is_same_v<T, ChangePointModelSpec>) {
                return {{"type", "changepoint"},
                        {"theta", m.theta},
                        {"mu", m.mu},
                        {"delta", m.delta},
                        {"innovation", process_json(m.innovation)}};
            } else {
                return {{"type", "two_regime_garch"},
                        {"theta", m.theta},
                        {"before", process_json(ProcessSpec{m.before})},
                        {"after", process_json(ProcessSpec{m.after})}};
            }
        },
        model);
}

McConfig parse_mc_config(const nlohmann::json& config) {
    McConfig mc;
    if (!config.contains("model")) {
        throw InputError("mc config: 'model' missing");
    }
    mc.model = parse_model(config["model"]);
    mc.n = static_cast<std::size_t>(require_number(config, "n", "mc"));
    mc.replications = static_cast<std::size_t>(require_number(config, "replications", "mc"));
    if (config.contains("alphas")) {
        mc.alphas = number_array(config, "alphas", "mc");
    }
    if (config.contains("transform")) {
        const std::string t = config["transform"].get<std::string>();
        if (t == "square") {
            mc.transform = McTransform::square;
        } else if (t == "none") {
            mc.transform = McTransform::none;
        } else {
            throw InputError("mc.transform: must be 'none' or 'square'");
        }
    }
    if (config.contains("statistic")) {
        const std::string s = config["statistic"].get<std::string>();
        if (s == "split_mn") {
            mc.statistic = McStatistic::split_mn;
        } else if (s == "full_tn") {
            mc.statistic = McStatistic::full_tn;
        } else {
            throw InputError("mc.statistic: must be 'split_mn' or 'full_tn'");
        }
    }
    if (config.contains("bandwidth_mult")) {
        mc.bandwidth.multiplier = require_number(config, "bandwidth_mult", "mc");
    }
    if (config.contains("min_seg")) {
        mc.min_seg = config["min_seg"].get<std::size_t>();
    }
    if (config.contains("master_seed")) {
        mc.master_seed = config["master_seed"].get<std::uint64_t>();
    }
    return mc;
}

}  // namespace lrcp
