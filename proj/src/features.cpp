#include "pttbp/features.hpp"

#include <algorithm>
#include <cmath>

#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

double TimingFeatures::*field(TimingIndex index) {
    switch (index) {
        case TimingIndex::PatF: return &TimingFeatures::pat_f;
        case TimingIndex::PatD: return &TimingFeatures::pat_d;
        case TimingIndex::PatP: return &TimingFeatures::pat_p;
        case TimingIndex::PttF: return &TimingFeatures::ptt_f;
        case TimingIndex::PttD: return &TimingFeatures::ptt_d;
        case TimingIndex::PttP: return &TimingFeatures::ptt_p;
    }
    return &TimingFeatures::ptt_p;
}

}  // namespace

double TimingFeatures::value(TimingIndex index) const { return this->*field(index); }
double& TimingFeatures::value(TimingIndex index) { return this->*field(index); }

TimingFeatures compute_window_features(const FiducialSet& fid) {
    TimingFeatures t;
    t.pat_f = fid.ppg_f - fid.r_peak;
    t.pat_d = fid.ppg_d - fid.r_peak;
    t.pat_p = fid.ppg_p - fid.r_peak;
    t.ptt_f = fid.ppg_f - fid.s1_peak;
    t.ptt_d = fid.ppg_d - fid.s1_peak;
    t.ptt_p = fid.ppg_p - fid.s1_peak;
    return t;
}

TimingFeatures aggregate_interval(const std::vector<TimingFeatures>& features, double trim_fraction) {
    if (features.empty()) fail(ErrorCode::EmptyInterval, "no accepted windows in the interval");
    if (!(trim_fraction >= 0.0 && trim_fraction < 0.5))
        fail(ErrorCode::InvalidArgument, "trim fraction must lie in [0, 0.5)");

    const auto n = features.size();
    const auto cut = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
    TimingFeatures out;
    std::vector<double> column(n);
    for (auto index : kAllIndices) {
        for (std::size_t i = 0; i < n; ++i) column[i] = features[i].value(index);
        if (cut > 0) std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (std::size_t i = cut; i < n - cut; ++i) sum += column[i];
        out.value(index) = sum / static_cast<double>(n - 2 * cut);
    }
    return out;
}

std::vector<CalibrationPair> build_calibration_pairs(const std::vector<MeasurementInterval>& intervals,
                                                     const std::vector<TimingFeatures>& aggregated) {
    if (intervals.size() != aggregated.size())
        fail(ErrorCode::LengthMismatch, std::to_string(intervals.size()) + " intervals but " +
                                            std::to_string(aggregated.size()) + " feature sets");
    std::vector<CalibrationPair> out;
    for (std::size_t k = 0; k < intervals.size(); ++k)
        out.push_back({aggregated[k], intervals[k].reference_bp.sbp, intervals[k].reference_bp.dbp,
                       intervals[k].index});
    return out;
}

}  // namespace pttbp
