#include "pttbp/delineation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pttbp/errors.hpp"
#include "pttbp/preprocess.hpp"

namespace pttbp {

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::NoRPeak: return "NoRPeak";
        case RejectReason::NoCompleteCycle: return "NoCompleteCycle";
        case RejectReason::NoPulseFound: return "NoPulseFound";
        case RejectReason::AmbiguousHeartSounds: return "AmbiguousHeartSounds";
        case RejectReason::OrderingViolation: return "OrderingViolation";
    }
    return "?";
}

namespace {

std::size_t to_index(double seconds, double fs) { return static_cast<std::size_t>(std::llround(seconds * fs)); }

// Local maximum that also dominates a +-half neighbourhood.
bool dominant_peak(std::span<const double> x, std::size_t i, std::size_t half) {
    if (i == 0 || i + 1 >= x.size()) return false;
    if (!(x[i] >= x[i - 1] && x[i] > x[i + 1])) return false;
    const std::size_t lo = i > half ? i - half : 0;
    const std::size_t hi = std::min(x.size() - 1, i + half);
    for (std::size_t k = lo; k <= hi; ++k)
        if (x[k] > x[i]) return false;
    return true;
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

}  // namespace

std::vector<double> min_max_scale(std::span<const double> x) {
    std::vector<double> out(x.size(), 0.0);
    if (x.empty()) return out;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return (v - *lo) / range; });
    return out;
}

std::vector<Window> split_windows(const MeasurementInterval& interval, const RecordSession& session, double window_s) {
    if (!(window_s > 0.0)) fail(ErrorCode::InvalidArgument, "window length must be positive");
    const double fs = session.fs;
    const auto len = static_cast<std::size_t>(std::llround(window_s * fs));
    const auto first = static_cast<std::size_t>(std::ceil(interval.usable_start * fs - 1e-9));
    const auto last = std::min(static_cast<std::size_t>(std::floor(interval.usable_end * fs + 1e-9)), session.size());
    if (len == 0 || last < first || (last - first) < len)
        fail(ErrorCode::IntervalTooShort, "interval " + std::to_string(interval.index) + " is shorter than one window");

    std::vector<Window> out;
    for (std::size_t s = first; s + len <= last; s += len) {
        auto slice = [&](const std::vector<double>& ch) {
            return min_max_scale(std::span<const double>(ch).subspan(s, len));
        };
        out.push_back({static_cast<double>(s) / fs, static_cast<double>(len) / fs, slice(session.ecg),
                       slice(session.ppg), slice(session.pcg)});
    }
    return out;
}

std::vector<double> detect_r_peaks(std::span<const double> ecg, double fs, const DelineationOptions& options) {
    struct Candidate {
        std::size_t index;
        double slope_mass;
    };
    const std::size_t n = ecg.size();
    const auto half = std::max<std::size_t>(1, to_index(options.r_slope_half_window_s, fs));

    std::vector<Candidate> candidates;
    std::size_t i = 0;
    while (i < n) {
        if (ecg[i] <= options.r_threshold) {
            ++i;
            continue;
        }
        const std::size_t on = i;
        while (i < n && ecg[i] > options.r_threshold) ++i;
        // Runs cut by the window edge have no trustworthy apex.
        if (on == 0 || i == n) continue;
        const auto apex = static_cast<std::size_t>(
            std::max_element(ecg.begin() + static_cast<std::ptrdiff_t>(on), ecg.begin() + static_cast<std::ptrdiff_t>(i)) -
            ecg.begin());
        const std::size_t lo = apex > half ? apex - half : 0;
        const std::size_t hi = std::min(n - 1, apex + half);
        double mass = 0.0;
        for (std::size_t k = lo; k < hi; ++k) mass += std::abs(ecg[k + 1] - ecg[k]);
        candidates.push_back({apex, mass});
    }
    if (candidates.empty()) fail(ErrorCode::NoRPeak, "no ECG sample above the R threshold");

    const double best = std::max_element(candidates.begin(), candidates.end(), [](auto& a, auto& b) {
                            return a.slope_mass < b.slope_mass;
                        })->slope_mass;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.slope_mass > b.slope_mass; });

    const double refractory = options.r_refractory_s * fs;
    std::vector<std::size_t> accepted;
    for (const auto& c : candidates) {
        if (c.slope_mass < options.r_slope_ratio * best) break;
        const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
            return std::abs(static_cast<double>(a) - static_cast<double>(c.index)) < refractory;
        });
        if (clear) accepted.push_back(c.index);
    }
    std::sort(accepted.begin(), accepted.end());
    std::vector<double> out;
    for (auto a : accepted) out.push_back(static_cast<double>(a) / fs);
    return out;
}

PpgFiducials detect_ppg_fiducials(std::span<const double> ppg, double fs, double cycle_anchor,
                                  const DelineationOptions& options, std::optional<double> search_end) {
    const std::size_t n = ppg.size();
    const std::size_t begin = std::min(n, static_cast<std::size_t>(std::ceil(cycle_anchor * fs - 1e-9)));
    std::size_t end = n;
    if (search_end) end = std::min(n, to_index(*search_end, fs) + 1);
    const auto half = std::max<std::size_t>(1, to_index(options.ppg_peak_half_window_s, fs));

    std::size_t foot = begin;
    for (std::size_t i = begin; i < end; ++i) {
        if (ppg[i] <= ppg[foot]) foot = i;
        if (i == foot || ppg[i] - ppg[foot] < options.ppg_min_prominence) continue;
        if (!dominant_peak(ppg, i, half)) continue;
        // A minimum pinned to the anchor means this rise began before it;
        // look for the next pulse instead.
        if (foot == begin && begin > 0 && ppg[begin - 1] < ppg[begin]) {
            foot = i;
            continue;
        }
        std::size_t steep = foot;
        double best = -1.0;
        for (std::size_t k = std::max<std::size_t>(foot, 1); k < i && k + 1 < n; ++k) {
            const double slope = ppg[k + 1] - ppg[k - 1];
            if (slope > best) {
                best = slope;
                steep = k;
            }
        }
        return {static_cast<double>(foot) / fs, static_cast<double>(steep) / fs, static_cast<double>(i) / fs};
    }
    fail(ErrorCode::NoPulseFound, "no PPG pulse rises after the cycle anchor");
}

std::vector<double> pcg_envelope(std::span<const double> pcg, double fs, const DelineationOptions& options) {
    if (pcg.empty()) return {};
    const double mean = std::accumulate(pcg.begin(), pcg.end(), 0.0) / static_cast<double>(pcg.size());
    std::vector<double> energy(pcg.size());
    std::transform(pcg.begin(), pcg.end(), energy.begin(), [&](double v) { return (v - mean) * (v - mean); });
    const FilterSpec lp{FilterKind::LowPass, std::nullopt, options.envelope_cutoff_hz, 3};
    return zero_phase_filter(energy, lp, fs);
}

double detect_pcg_s1(std::span<const double> pcg, double fs, double ppg_p, const DelineationOptions& options,
                     double not_before) {
    const auto env = pcg_envelope(pcg, fs, options);
    const double top = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());
    const auto half = std::max<std::size_t>(1, to_index(0.5 * options.heart_sound_min_gap_s, fs));

    std::vector<double> candidates;
    if (top > 0.0) {
        for (std::size_t i = 1; i + 1 < env.size(); ++i) {
            const double t = static_cast<double>(i) / fs;
            if (t < not_before || env[i] < options.heart_sound_min_level * top) continue;
            if (dominant_peak(env, i, half)) candidates.push_back(t);
        }
    }
    if (candidates.size() < 2) fail(ErrorCode::AmbiguousHeartSounds, "fewer than two heart-sound candidates");

    const auto s2 = std::min_element(candidates.begin(), candidates.end(), [&](double a, double b) {
        return std::abs(a - ppg_p) < std::abs(b - ppg_p);
    });
    if (s2 == candidates.begin()) fail(ErrorCode::AmbiguousHeartSounds, "no heart sound precedes the S2 candidate");
    return *std::prev(s2);
}

namespace {

DelineationResult delineate_cycle(const Window& w, double fs, double r, double span_end,
                                  const DelineationOptions& options) {
    PpgFiducials ppg;
    try {
        ppg = detect_ppg_fiducials(w.ppg, fs, r, options, span_end);
    } catch (const Error& e) {
        return Rejection{RejectReason::NoPulseFound, e.what()};
    }
    double s1 = 0.0;
    try {
        s1 = detect_pcg_s1(w.pcg, fs, ppg.peak, options, std::max(0.0, r - options.s1_lead_s));
    } catch (const Error& e) {
        return Rejection{RejectReason::AmbiguousHeartSounds, e.what()};
    }
    FiducialSet f{w.start + r, w.start + s1, w.start + ppg.foot, w.start + ppg.max_slope, w.start + ppg.peak};
    if (!f.ordered())
        return Rejection{RejectReason::OrderingViolation, "fiducials out of physiological order"};
    return f;
}

}  // namespace

DelineationResult delineate_window(const Window& window, double fs, const DelineationOptions& options) {
    std::vector<double> peaks;
    try {
        peaks = detect_r_peaks(window.ecg, fs, options);
    } catch (const Error& e) {
        return Rejection{RejectReason::NoRPeak, e.what()};
    }
    if (peaks.size() < 2) return Rejection{RejectReason::NoCompleteCycle, "fewer than two R-peaks in the window"};

    std::vector<double> rr;
    for (std::size_t i = 1; i < peaks.size(); ++i) rr.push_back(peaks[i] - peaks[i - 1]);
    const double rr_med = median(rr);
    const double length = static_cast<double>(window.ecg.size()) / fs;

    std::vector<FiducialSet> found;
    std::optional<Rejection> first_failure;
    for (double r : peaks) {
        if (r + rr_med > length) break;
        auto res = delineate_cycle(window, fs, r, std::min(length, r + options.cycle_span_factor * rr_med), options);
        if (auto* f = std::get_if<FiducialSet>(&res)) {
            found.push_back(*f);
        } else if (!first_failure) {
            first_failure = std::get<Rejection>(res);
        }
        if (options.cycles == CycleMode::First) break;
    }
    if (found.empty()) {
        if (first_failure) return *first_failure;
        return Rejection{RejectReason::NoCompleteCycle, "no complete cardiac cycle in the window"};
    }
    if (options.cycles == CycleMode::First) return found.front();

    FiducialSet mean{};
    for (const auto& f : found) {
        mean.r_peak += f.r_peak;
        mean.s1_peak += f.s1_peak;
        mean.ppg_f += f.ppg_f;
        mean.ppg_d += f.ppg_d;
        mean.ppg_p += f.ppg_p;
    }
    const double k = static_cast<double>(found.size());
    mean.r_peak /= k;
    mean.s1_peak /= k;
    mean.ppg_f /= k;
    mean.ppg_d /= k;
    mean.ppg_p /= k;
    return mean;
}

}  // namespace pttbp
