#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pttbp/calibration.hpp"
#include "pttbp/delineation.hpp"
#include "pttbp/evaluation.hpp"
#include "pttbp/features.hpp"
#include "pttbp/segmentation.hpp"
#include "pttbp/signal_io.hpp"

namespace pttbp {

struct PipelineConfig {
    double window_s = 2.5;
    double median_ms = 5.0;
    GdConfig gd;
    TimingIndex index = TimingIndex::PatP;
    Target target = Target::Sbp;
    SegmentationOptions segmentation;
    DelineationOptions delineation;
    double trim_fraction = 0.0;
};

struct WindowRecord {
    int interval = 0;
    double start = 0.0;
    std::optional<FiducialSet> fiducials;
    std::optional<TimingFeatures> features;
    std::optional<RejectReason> reason;
    std::string detail;
};

struct IntervalDiagnostics {
    int index = 0;
    double usable_start = 0.0;
    double usable_end = 0.0;
    int accepted = 0;
    int rejected = 0;
    std::map<std::string, int> reasons;
    bool dropped = false;
};

struct ExtractResult {
    std::string subject_id;
    std::vector<CuffEvent> events;
    std::vector<MeasurementInterval> intervals;
    std::vector<WindowRecord> windows;
    std::vector<IntervalDiagnostics> diagnostics;
    std::vector<CalibrationPair> pairs;
    std::vector<std::string> warnings;
};

// Channels after median smoothing, normalization and filtering.
RecordSession preprocess_session(const RecordSession& session, double median_ms = 5.0);

// Preprocess, segment on the FSR cuff pulses, delineate every window and
// average per interval. Intervals with no accepted window are dropped with a
// warning. Throws on session-level failures (e.g. NoEventsFound).
ExtractResult extract_pairs(const RecordSession& session, const PipelineConfig& config = {});

struct SubjectPairs {
    std::string subject_id;
    std::vector<CalibrationPair> pairs;
};

// Leave-one-out for every subject, then pooled statistics. Subjects with
// fewer than four pairs are reported in `excluded` instead of failing the run.
struct CohortEvaluation {
    std::vector<LooResult> subjects;
    std::vector<std::string> excluded;
    PooledReport pooled;
};

CohortEvaluation evaluate_cohort(const std::vector<SubjectPairs>& subjects, Target target, TimingIndex index,
                                 const GdConfig& gd = {});

// Session CSVs of a cohort directory, sorted by name. Throws IoFailure.
std::vector<std::filesystem::path> list_sessions(const std::filesystem::path& dir);

}  // namespace pttbp
