#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lrcp/asymptotics.hpp"
#include "lrcp/series.hpp"

namespace lrcp {

/// CUSUM statistic and change-point estimate of the segment X_{lo+1}..X_hi.
struct SegmentTest {
    std::size_t lo = 0;        // segment covers observations lo+1 .. hi
    std::size_t hi = 0;
    double t_stat = 0.0;       // T(lo, hi)
    std::size_t khat = 0;      // estimated change point, absolute (lo < khat < hi)
    std::size_t q_used = 0;
};

/// T(lo, hi) and the local change-point estimate, computed from the
/// sub-series with bandwidth q(hi - lo). The segment must be long enough to
/// split: hi - lo >= 2 * min_seg.
[[nodiscard]] SegmentTest segment_test(std::span<const double> x, std::size_t lo, std::size_t hi,
                                       const BandwidthRule& bandwidth, std::size_t min_seg = 20);

enum class Verdict { weakly_dependent, long_range_dependent };

enum class StageDecision { accept, split, long_range_dependent, exhausted_by_min_seg, degenerate };

[[nodiscard]] std::string to_string(StageDecision d);
[[nodiscard]] std::string to_string(Verdict v);

/// One stage of the multistage procedure: the max statistic over the current
/// segments against the stage critical value, and what was done about it.
struct StageRecord {
    std::size_t stage = 0;   // u: number of segments compared at this stage
    double m_hat = 0.0;      // max statistic over the current segments
    double critical = 0.0;   // c(stage)
    bool exceeded = false;
    StageDecision decision = StageDecision::accept;
    std::size_t split_lo = 0;   // segment split at this stage (when decision == split)
    std::size_t split_hi = 0;
    std::size_t split_at = 0;
    std::string note;
};

struct SegmentationResult {
    Verdict verdict = Verdict::weakly_dependent;
    std::vector<std::size_t> changepoints;  // absolute indices, strictly increasing
    std::vector<StageRecord> trace;
    std::vector<SegmentTest> segments;      // state when the procedure stopped
    bool exhausted_by_min_seg = false;
    bool degenerate = false;                // whole series carries no fluctuation
    std::size_t stats_evaluated = 0;
};

/// Recursive binary segmentation with stage-indexed critical values c(u).
///
/// Stage u compares the largest statistic over the current u segments with
/// c(u) = the (1-alpha)^(1/u) bridge-supremum quantile. Acceptance at stage
/// u means u-1 change points; surviving past stage max_changes + 1 means the
/// data contain a long-range dependent stretch. One split per stage, always
/// of the splittable segment with the largest statistic (leftmost on ties);
/// segments whose split would violate min_seg are kept but never split.
[[nodiscard]] SegmentationResult multistage_classify(std::span<const double> x,
                                                     std::size_t max_changes, double alpha,
                                                     const BandwidthRule& bandwidth = {},
                                                     std::size_t min_seg = 20);

}  // namespace lrcp
