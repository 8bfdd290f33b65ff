#pragma once

#include <span>
#include <vector>

#include "pttbp/model.hpp"
#include "pttbp/signal_io.hpp"

namespace pttbp {

// t1: cuff starts inflating, t2: deflation starts, t3: deflation done and
// the monitor reports the reading. Seconds from recording start.
struct CuffEvent {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
};

enum class SpanMode {
    BetweenT3,  // previous t3 up to this event's t1
    PreT1,      // only the last pre_t1_s seconds before t1
};

struct SegmentationOptions {
    double threshold_fraction = 0.20;  // of peak-to-baseline range
    double plateau_fraction = 0.02;    // t2: last sample within this of the pulse max
    double baseline_quantile = 0.05;
    double min_event_s = 2.0;          // shorter excursions are not cuff pulses
    SpanMode span = SpanMode::BetweenT3;
    double pre_t1_s = 10.0;
    double min_usable_s = 2.5;         // one delineation window
};

struct MeasurementInterval {
    int index = 0;
    double start = 0.0;     // previous t3, or 0
    double end = 0.0;       // this event's t3
    double cuff_start = 0.0;  // this event's t1
    double usable_start = 0.0;
    double usable_end = 0.0;
    BpReading reference_bp;

    double usable_duration() const { return usable_end - usable_start; }
};

// fsr must already be low-pass filtered. Throws NoEventsFound.
std::vector<CuffEvent> detect_cuff_events(std::span<const double> fsr, double fs,
                                          const SegmentationOptions& options = {});

// Pairs the k-th event with reference_bps[k]. Throws NoEventsFound,
// CountMismatch, DegenerateInterval.
std::vector<MeasurementInterval> split_intervals(const RecordSession& session, const std::vector<CuffEvent>& events,
                                                 const SegmentationOptions& options = {});

}  // namespace pttbp
