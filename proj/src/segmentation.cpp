#include "lrcp/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrcp/errors.hpp"
#include "lrcp/stats.hpp"

namespace lrcp {

namespace {

struct LiveSegment {
    SegmentTest test;
    bool frozen = false;  // split would violate min_seg; keep, never split
};

// Statistic + local k-hat of x[lo..hi), without the splittability
// requirement: any segment long enough for its own bandwidth qualifies.
SegmentTest evaluate_segment(std::span<const double> x, std::size_t lo, std::size_t hi,
                             const BandwidthRule& bandwidth, std::size_t min_seg) {
    const std::size_t len = hi - lo;
    if (len < std::max<std::size_t>(min_seg, 3)) {
        throw SegmentTooShortError("segment (" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] is shorter than min_seg");
    }
    const BandwidthResult bw = default_bandwidth(len, bandwidth);
    if (bw.clamped) {
        throw SegmentTooShortError("segment (" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] is too short for its bandwidth");
    }
    const std::span<const double> seg = x.subspan(lo, len);
    SegmentTest t;
    t.lo = lo;
    t.hi = hi;
    t.q_used = bw.q;
    t.t_stat = cusum_statistic(seg, bw.q);
    t.khat = lo + changepoint_estimator(seg);
    return t;
}

}  // namespace

std::string to_string(StageDecision d) {
    switch (d) {
        case StageDecision::accept: return "accept";
        case StageDecision::split: return "split";
        case StageDecision::long_range_dependent: return "long_range_dependent";
        case StageDecision::exhausted_by_min_seg: return "exhausted_by_min_seg";
        case StageDecision::degenerate: return "degenerate_zero_variance";
    }
    return "unknown";
}

std::string to_string(Verdict v) {
    return v == Verdict::weakly_dependent ? "weakly_dependent" : "long_range_dependent";
}

SegmentTest segment_test(std::span<const double> x, std::size_t lo, std::size_t hi,
                         const BandwidthRule& bandwidth, std::size_t min_seg) {
    if (lo >= hi || hi > x.size()) {
        throw InputError("segment_test: need 0 <= lo < hi <= n");
    }
    if (hi - lo < 2 * min_seg) {
        throw SegmentTooShortError("segment_test: segment of length " +
                                   std::to_string(hi - lo) +
                                   " cannot hold two segments of " + std::to_string(min_seg));
    }
    return evaluate_segment(x, lo, hi, bandwidth, min_seg);
}

SegmentationResult multistage_classify(std::span<const double> x, std::size_t max_changes,
                                       double alpha, const BandwidthRule& bandwidth,
                                       std::size_t min_seg) {
    const std::size_t n = x.size();
    if (max_changes < 1) {
        throw InputError("multistage_classify: max_changes must be at least 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("multistage_classify: alpha must lie in (0, 1)");
    }
    if (n < (max_changes + 1) * min_seg) {
        throw SegmentTooShortError("multistage_classify: series of length " +
                                   std::to_string(n) + " cannot hold " +
                                   std::to_string(max_changes + 1) + " segments of " +
                                   std::to_string(min_seg));
    }

    SegmentationResult result;
    std::vector<LiveSegment> segments;

    const auto finalize = [&](Verdict verdict) {
        result.verdict = verdict;
        result.changepoints.clear();
        for (const LiveSegment& s : segments) {
            if (s.test.hi < n) {
                result.changepoints.push_back(s.test.hi);
            }
            result.segments.push_back(s.test);
        }
        std::sort(result.changepoints.begin(), result.changepoints.end());
        return result;
    };

    try {
        segments.push_back({evaluate_segment(x, 0, n, bandwidth, min_seg), false});
        result.stats_evaluated++;
    } catch (const ZeroVarianceError&) {
        // A flat series carries no evidence of any structure.
        result.degenerate = true;
        result.trace.push_back({1, 0.0, critical_value(1, alpha).value, false,
                                StageDecision::degenerate, 0, 0, 0,
                                "zero long-run variance on the full series"});
        return finalize(Verdict::weakly_dependent);
    }

    for (std::size_t stage = 1; stage <= max_changes + 1; ++stage) {
        StageRecord record;
        record.stage = stage;
        record.critical = critical_value(stage, alpha).value;

        double m_hat = -std::numeric_limits<double>::infinity();
        for (const LiveSegment& s : segments) {
            m_hat = std::max(m_hat, s.test.t_stat);
        }
        record.m_hat = m_hat;
        record.exceeded = m_hat > record.critical;

        if (!record.exceeded) {
            record.decision = StageDecision::accept;
            result.trace.push_back(record);
            return finalize(Verdict::weakly_dependent);
        }
        if (stage == max_changes + 1) {
            record.decision = StageDecision::long_range_dependent;
            result.trace.push_back(record);
            return finalize(Verdict::long_range_dependent);
        }

        // Split the splittable segment with the largest statistic; ties go to
        // the leftmost. Segments whose split fails are frozen and the next
        // candidate is tried.
        bool split_done = false;
        while (!split_done) {
            LiveSegment* target = nullptr;
            for (LiveSegment& s : segments) {
                if (s.frozen) {
                    continue;
                }
                if (target == nullptr || s.test.t_stat > target->test.t_stat ||
                    (s.test.t_stat == target->test.t_stat && s.test.lo < target->test.lo)) {
                    target = &s;
                }
            }
            if (target == nullptr) {
                record.decision = StageDecision::exhausted_by_min_seg;
                record.note = "no splittable segment remains";
                result.exhausted_by_min_seg = true;
                result.trace.push_back(record);
                return finalize(Verdict::long_range_dependent);
            }

            const std::size_t lo = target->test.lo;
            const std::size_t hi = target->test.hi;
            const std::size_t at = target->test.khat;
            try {
                if (at - lo < min_seg || hi - at < min_seg) {
                    throw SegmentTooShortError("split parts below min_seg");
                }
                SegmentTest left = evaluate_segment(x, lo, at, bandwidth, min_seg);
                result.stats_evaluated++;
                SegmentTest right = evaluate_segment(x, at, hi, bandwidth, min_seg);
                result.stats_evaluated++;

                record.decision = StageDecision::split;
                record.split_lo = lo;
                record.split_hi = hi;
                record.split_at = at;

                target->test = left;
                LiveSegment right_seg{right, false};
                const auto pos = std::find_if(segments.begin(), segments.end(),
                                              [&](const LiveSegment& s) {
                                                  return s.test.lo == lo;
                                              });
                segments.insert(pos + 1, right_seg);
                split_done = true;
            } catch (const ComputationError&) {
                target->frozen = true;
                if (!record.note.empty()) {
                    record.note += "; ";
                }
                record.note += "froze (" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
            }
        }
        result.trace.push_back(record);
    }
    // Unreachable: every stage returns or splits, and the last stage returns.
    return finalize(Verdict::weakly_dependent);
}

}  // namespace lrcp
