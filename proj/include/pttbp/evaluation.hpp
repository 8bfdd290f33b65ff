#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pttbp/calibration.hpp"
#include "pttbp/features.hpp"

namespace pttbp {

struct LooRecord {
    int interval_index = 0;
    double target_bp = 0.0;     // mmHg
    double estimated_bp = 0.0;  // mmHg
    double error = 0.0;         // estimate - target

    bool operator==(const LooRecord&) const = default;
};

struct SkippedFold {
    int interval_index = 0;
    std::string reason;
};

struct LooResult {
    std::string subject_id;
    std::vector<LooRecord> records;
    std::vector<SkippedFold> skipped;
    std::vector<FitReport> fits;  // one per successful fold
};

struct MetricsReport {
    double me = 0.0;
    double mae = 0.0;
    double std = 0.0;            // population SD of the errors
    std::optional<double> r;     // absent when targets or estimates are constant
    std::size_t n = 0;
    double within_10mmhg = 0.0;  // share of |error| <= 10 mmHg
};

struct BlandAltmanPoint {
    double mean = 0.0;        // (target + estimate) / 2
    double difference = 0.0;  // estimate - target
};

struct BlandAltman {
    double mean_error = 0.0;
    double std = 0.0;
    double upper_limit = 0.0;
    double lower_limit = 0.0;
    std::vector<BlandAltmanPoint> points;
};

struct ConfidenceBin {
    double low = 0.0;   // inclusive
    double high = 0.0;  // exclusive
    std::size_t n = 0;
    double mean_error = 0.0;
    std::optional<double> ci_half_width;  // absent when n < 2
};

struct ConfidenceBins {
    double bin_width = 10.0;
    std::vector<ConfidenceBin> bins;
};

struct PooledReport {
    MetricsReport metrics;
    BlandAltman bland_altman;
    ConfidenceBins bins;
    std::vector<LooRecord> records;
    std::size_t skipped_folds = 0;
};

// Per held-out pair: fit on the others, estimate the held-out BP. Folds whose
// fit or estimate fails are skipped and listed. Throws TooFewPairs.
LooResult leave_one_out(const std::vector<CalibrationPair>& pairs, Target target, TimingIndex index,
                        const GdConfig& config = {});

// Throws TooFewPoints.
MetricsReport compute_metrics(std::span<const LooRecord> results);
BlandAltman bland_altman(std::span<const LooRecord> results);

// Errors grouped by 10 mmHg target bins aligned to multiples of bin_width;
// half width 1.96 * SD / sqrt(n) for bins with at least two errors.
ConfidenceBins confidence_bins(std::span<const LooRecord> results, double bin_width = 10.0);

// Concatenates every subject's records before computing statistics.
PooledReport pooled_report(const std::vector<LooResult>& subjects);

}  // namespace pttbp
