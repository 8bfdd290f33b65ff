#include "pttbp/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

double quantile(std::span<const double> x, double q) {
    std::vector<double> tmp(x.begin(), x.end());
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(tmp.size() - 1)));
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k), tmp.end());
    return tmp[k];
}

}  // namespace

std::vector<CuffEvent> detect_cuff_events(std::span<const double> fsr, double fs, const SegmentationOptions& options) {
    if (fsr.empty()) fail(ErrorCode::EmptySignal, "empty FSR signal");
    if (!(fs > 0.0)) fail(ErrorCode::BadSamplingRate, "fs must be positive");

    const double baseline = quantile(fsr, options.baseline_quantile);
    const double peak = *std::max_element(fsr.begin(), fsr.end());
    const double range = peak - baseline;
    if (!(range > 1e-9)) fail(ErrorCode::NoEventsFound, "FSR signal is flat");

    const double threshold = baseline + options.threshold_fraction * range;
    const auto min_len = static_cast<std::size_t>(options.min_event_s * fs);
    const std::size_t n = fsr.size();

    std::vector<CuffEvent> events;
    std::size_t i = 0;
    while (i < n) {
        if (fsr[i] <= threshold) {
            ++i;
            continue;
        }
        const std::size_t on = i;
        while (i < n && fsr[i] > threshold) ++i;
        const std::size_t off = i - 1;
        // A pulse cut by either end of the recording has no usable t1 or t3.
        if (off - on + 1 < min_len || on == 0 || i == n) continue;

        const auto top = std::max_element(fsr.begin() + static_cast<std::ptrdiff_t>(on),
                                          fsr.begin() + static_cast<std::ptrdiff_t>(off + 1));
        const double top_value = *top;
        const double height = top_value - baseline;
        const double plateau_level = top_value - options.plateau_fraction * height;
        const double foot_level = baseline + options.plateau_fraction * height;

        auto t2 = static_cast<std::size_t>(top - fsr.begin());
        for (std::size_t k = t2; k <= off; ++k)
            if (fsr[k] >= plateau_level) t2 = k;

        std::size_t t1 = on;
        while (t1 > 0 && fsr[t1 - 1] > foot_level && fsr[t1 - 1] < fsr[t1]) --t1;
        std::size_t t3 = off;
        while (t3 + 1 < n && fsr[t3 + 1] > foot_level && fsr[t3 + 1] < fsr[t3]) ++t3;

        events.push_back({static_cast<double>(t1) / fs, static_cast<double>(t2) / fs, static_cast<double>(t3) / fs});
    }
    if (events.empty()) fail(ErrorCode::NoEventsFound, "no cuff pulse found on the FSR channel");
    return events;
}

std::vector<MeasurementInterval> split_intervals(const RecordSession& session, const std::vector<CuffEvent>& events,
                                                 const SegmentationOptions& options) {
    if (events.empty()) fail(ErrorCode::NoEventsFound, "no cuff events to split on");
    if (events.size() != session.reference_bps.size())
        fail(ErrorCode::CountMismatch, std::to_string(events.size()) + " cuff events but " +
                                           std::to_string(session.reference_bps.size()) + " reference BPs");

    std::vector<MeasurementInterval> out;
    double prev_t3 = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        MeasurementInterval iv;
        iv.index = static_cast<int>(k);
        iv.start = prev_t3;
        iv.end = e.t3;
        iv.cuff_start = e.t1;
        iv.usable_end = e.t1;
        iv.usable_start = options.span == SpanMode::PreT1 ? std::max(prev_t3, e.t1 - options.pre_t1_s) : prev_t3;
        iv.reference_bp = session.reference_bps[k];
        if (iv.usable_duration() < options.min_usable_s)
            fail(ErrorCode::DegenerateInterval, "interval " + std::to_string(k) + " has only " +
                                                    std::to_string(iv.usable_duration()) + " s of cuff-free signal");
        out.push_back(iv);
        prev_t3 = e.t3;
    }
    return out;
}

}  // namespace pttbp
