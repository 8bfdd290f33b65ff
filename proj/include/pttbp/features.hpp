#pragma once

#include <vector>

#include "pttbp/delineation.hpp"
#include "pttbp/model.hpp"
#include "pttbp/segmentation.hpp"

namespace pttbp {

// PAT is measured from the ECG R-peak, PTT from PCG S1; suffix f/d/p names
// the PPG foot, max-slope point and systolic peak. Seconds.
struct TimingFeatures {
    double pat_f = 0.0, pat_d = 0.0, pat_p = 0.0;
    double ptt_f = 0.0, ptt_d = 0.0, ptt_p = 0.0;

    double value(TimingIndex index) const;
    double& value(TimingIndex index);
};

struct CalibrationPair {
    TimingFeatures features;
    double sbp = 0.0;
    double dbp = 0.0;
    int interval_index = 0;

    double bp(Target target) const { return target == Target::Sbp ? sbp : dbp; }
};

TimingFeatures compute_window_features(const FiducialSet& fid);

// Per-field mean. trim_fraction > 0 drops that share of the lowest and
// highest values of each field first. Throws EmptyInterval.
TimingFeatures aggregate_interval(const std::vector<TimingFeatures>& features, double trim_fraction = 0.0);

// Throws LengthMismatch.
std::vector<CalibrationPair> build_calibration_pairs(const std::vector<MeasurementInterval>& intervals,
                                                     const std::vector<TimingFeatures>& aggregated);

}  // namespace pttbp
