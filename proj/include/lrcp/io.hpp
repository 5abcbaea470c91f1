#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrcp/asymptotics.hpp"
#include "lrcp/experiments.hpp"
#include "lrcp/series.hpp"

namespace lrcp {

inline constexpr const char* kToolName = "lrcp";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class InputKind { levels, prices };
enum class Transform { log_returns_pct, simple_returns_pct, demean, square };

/// Ingestion pipeline: what the rows mean and which transforms to apply, in
/// order. Parsed from strings such as "prices,log_returns_pct,demean,square";
/// a bare transform list implies levels input.
struct Pipeline {
    InputKind input_kind = InputKind::levels;
    std::vector<Transform> transforms;
    std::optional<std::string> column;  // name (with header) or 0-based index

    [[nodiscard]] static Pipeline parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;

    /// Rejects chains that square raw prices before any returns/demean step.
    void validate() const;
};

/// Reads one column of a CSV (or single-column text file), applies the
/// pipeline transforms in order. The header row is auto-detected by a
/// non-numeric first row. Parse failures carry the line number.
[[nodiscard]] Series load_series(const std::string& path, const Pipeline& pipeline);

/// Transform stage applied to already-loaded values; exposed for tests and
/// for in-memory callers.
[[nodiscard]] std::vector<double> apply_transforms(std::vector<double> values,
                                                   const Pipeline& pipeline);

/// Full-precision decimal rendering (round-trips a double exactly).
[[nodiscard]] std::string format_double(double v);

/// Writes a series one value per line at full precision, with a JSON sidecar
/// (path + ".meta.json") describing how it was produced.
void write_series_file(const std::string& path, std::span<const double> values,
                       const nlohmann::json& sidecar_metadata);

/// Reads a one-value-per-line series file back.
[[nodiscard]] Series read_series_file(const std::string& path);

// --- machine-readable reports -------------------------------------------------

/// Split test on a loaded series: statistics, critical value at the chosen
/// level and the verdict.
[[nodiscard]] nlohmann::json run_test_report(const Series& series, const Pipeline& pipeline,
                                             double alpha, const BandwidthRule& bandwidth,
                                             std::size_t min_seg,
                                             const std::string& input_path);

/// Multistage segmentation with full trace.
[[nodiscard]] nlohmann::json run_segmentation_report(const Series& series,
                                                     const Pipeline& pipeline,
                                                     double alpha, std::size_t max_changes,
                                                     const BandwidthRule& bandwidth,
                                                     std::size_t min_seg,
                                                     const std::string& input_path);

/// Plot-ready diagnostics: autocorrelations up to max_lag and the raw +
/// smoothed periodogram at the Fourier frequencies, with log10 columns.
[[nodiscard]] nlohmann::json diagnostics_report(const Series& series, std::size_t max_lag,
                                                std::size_t smoothing_window);

/// Monte Carlo rejection table as a report.
[[nodiscard]] nlohmann::json rejection_table_report(const McConfig& config,
                                                    const RejectionTable& table);

/// Bandwidth rule validation as a report.
[[nodiscard]] nlohmann::json bandwidth_check_report(const BandwidthRule& rule,
                                                    const BandwidthCheckReport& report,
                                                    std::optional<double> hurst);

/// Human-readable rendering; every number shown is taken from the report.
[[nodiscard]] std::string render_text(const nlohmann::json& report);

// --- configuration parsing ------------------------------------------------------

/// Process model from JSON, e.g. {"type": "garch", "omega": ..., ...}.
/// Errors name the offending field.
[[nodiscard]] McModel parse_model(const nlohmann::json& spec);
[[nodiscard]] nlohmann::json model_to_json(const McModel& model);

/// Monte Carlo configuration from JSON.
[[nodiscard]] McConfig parse_mc_config(const nlohmann::json& config);

}  // namespace lrcp
