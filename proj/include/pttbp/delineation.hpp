#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pttbp/segmentation.hpp"
#include "pttbp/signal_io.hpp"

namespace pttbp {

// A fixed-length slice of the preprocessed ECG/PPG/PCG, each channel
// min-max scaled to [0, 1] within the slice.
struct Window {
    double start = 0.0;     // s, absolute
    double duration = 2.5;  // s
    std::vector<double> ecg;
    std::vector<double> ppg;
    std::vector<double> pcg;
};

// Fiducial times of one cardiac cycle, absolute seconds.
struct FiducialSet {
    double r_peak = 0.0;
    double s1_peak = 0.0;
    double ppg_f = 0.0;
    double ppg_d = 0.0;
    double ppg_p = 0.0;

    bool ordered() const { return r_peak <= s1_peak && s1_peak <= ppg_f && ppg_f <= ppg_d && ppg_d <= ppg_p; }
};

struct PpgFiducials {
    double foot = 0.0;
    double max_slope = 0.0;
    double peak = 0.0;
};

enum class RejectReason { NoRPeak, NoCompleteCycle, NoPulseFound, AmbiguousHeartSounds, OrderingViolation };

std::string_view to_string(RejectReason r);

struct Rejection {
    RejectReason reason;
    std::string detail;
};

using DelineationResult = std::variant<FiducialSet, Rejection>;

enum class CycleMode { First, Average };

struct DelineationOptions {
    double r_threshold = 0.9;           // on the scaled ECG
    double r_refractory_s = 0.25;
    double r_slope_half_window_s = 0.03;
    double r_slope_ratio = 0.5;         // of the steepest candidate's slope mass
    double cycle_span_factor = 1.2;     // search span after the anchor, in median RR
    double envelope_cutoff_hz = 20.0;
    double heart_sound_min_level = 0.1;   // of the window's envelope maximum
    double heart_sound_min_gap_s = 0.1;
    double ppg_min_prominence = 0.2;      // scaled units
    double ppg_peak_half_window_s = 0.05;
    double s1_lead_s = 0.02;            // S1 may precede the R-peak by at most this
    CycleMode cycles = CycleMode::First;
};

// Consecutive non-overlapping windows over the interval's usable span; the
// trailing remainder is dropped. `session` holds preprocessed channels.
// Throws IntervalTooShort.
std::vector<Window> split_windows(const MeasurementInterval& interval, const RecordSession& session,
                                  double window_s = 2.5);

// Maps x onto [0, 1]; a flat input maps to all zeros.
std::vector<double> min_max_scale(std::span<const double> x);

// Detector outputs below are seconds from the window start.

// Throws NoRPeak.
std::vector<double> detect_r_peaks(std::span<const double> ecg, double fs, const DelineationOptions& options = {});

// Fiducials of the first pulse rising after cycle_anchor and peaking before
// search_end (defaults to the window end). Throws NoPulseFound.
PpgFiducials detect_ppg_fiducials(std::span<const double> ppg, double fs, double cycle_anchor,
                                  const DelineationOptions& options = {},
                                  std::optional<double> search_end = std::nullopt);

// Envelope of the PCG used for heart-sound candidates.
std::vector<double> pcg_envelope(std::span<const double> pcg, double fs, const DelineationOptions& options = {});

// Heart-sound candidates are envelope peaks at or after not_before. The one
// nearest ppg_p is S2; the latest candidate before it is S1.
// Throws AmbiguousHeartSounds.
double detect_pcg_s1(std::span<const double> pcg, double fs, double ppg_p, const DelineationOptions& options = {},
                     double not_before = 0.0);

DelineationResult delineate_window(const Window& window, double fs, const DelineationOptions& options = {});

}  // namespace pttbp
