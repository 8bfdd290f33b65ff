#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pttbp/delineation.hpp"
#include "pttbp/pipeline.hpp"
#include "pttbp/synthetic.hpp"
#include "test_util.hpp"

using namespace pttbp;

namespace {

constexpr double kFs = 1000.0;
constexpr double kPi = std::numbers::pi;

std::vector<double> zeros(double seconds) { return std::vector<double>(static_cast<std::size_t>(seconds * kFs), 0.0); }

void gauss(std::vector<double>& x, double t0, double sigma, double amp) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(i) / kFs - t0;
        x[i] += amp * std::exp(-0.5 * d * d / (sigma * sigma));
    }
}

void burst(std::vector<double>& x, double t0, double amp) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(i) / kFs - t0;
        x[i] += amp * std::exp(-0.5 * d * d / (0.015 * 0.015)) * std::cos(2 * kPi * 40 * d);
    }
}

// Raised-cosine rise from onset over `rise`, then a slow cosine decay.
void pulse(std::vector<double>& x, double onset, double rise, double decay) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / kFs - onset;
        if (t >= 0 && t < rise) x[i] = std::max(x[i], 0.5 * (1 - std::cos(kPi * t / rise)));
        else if (t >= rise && t < rise + decay) x[i] = std::max(x[i], 0.5 * (1 + std::cos(kPi * (t - rise) / decay)));
    }
}

struct WindowTruth {
    const BeatTruth* beat;
    FiducialSet found;
};

// Delineates every window of a synthetic session and pairs each result with
// the ground-truth beat nearest its R-peak.
std::vector<WindowTruth> delineate_synthetic(const SyntheticSession& s, const DelineationOptions& opt,
                                             int* rejected = nullptr) {
    const auto pre = preprocess_session(s.session);
    std::vector<CuffEvent> events;
    for (const auto& iv : s.truth.intervals) events.push_back({iv.t1, iv.t2, iv.t3});
    const auto intervals = split_intervals(pre, events);
    std::vector<WindowTruth> out;
    for (const auto& iv : intervals) {
        for (const auto& w : split_windows(iv, pre)) {
            const auto res = delineate_window(w, pre.fs, opt);
            if (const auto* f = std::get_if<FiducialSet>(&res)) {
                const BeatTruth* best = &s.truth.beats.front();
                for (const auto& b : s.truth.beats)
                    if (std::abs(b.r - f->r_peak) < std::abs(best->r - f->r_peak)) best = &b;
                out.push_back({best, *f});
            } else if (rejected) {
                ++*rejected;
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("window tiling and scaling") {
    RecordSession s;
    s.fs = 100;
    s.ecg.resize(3000);
    for (std::size_t i = 0; i < s.ecg.size(); ++i) s.ecg[i] = 2.0 + 4.0 * std::abs(std::sin(0.01 * double(i)));
    s.ppg = s.pcg = s.ecg;
    MeasurementInterval iv;
    iv.usable_start = 5.0;
    iv.usable_end = 15.0;
    CHECK(split_windows(iv, s).size() == 4);
    iv.usable_end = 14.0;
    const auto w = split_windows(iv, s);
    CHECK(w.size() == 3);
    CHECK(w[1].start == doctest::Approx(7.5));
    for (const auto& win : w) {
        CHECK(win.ecg.size() == 250);
        CHECK(*std::min_element(win.ecg.begin(), win.ecg.end()) == 0.0);
        CHECK(*std::max_element(win.ppg.begin(), win.ppg.end()) == 1.0);
    }
    iv.usable_end = 7.0;
    CHECK_ERROR_CODE(split_windows(iv, s), ErrorCode::IntervalTooShort);
}

TEST_CASE("min-max scaling maps min to 0 and max to 1") {
    const std::vector<double> x{2, 3, 6, 4};
    const auto y = min_max_scale(x);
    CHECK(y == std::vector<double>{0.0, 0.25, 1.0, 0.5});
    CHECK(min_max_scale(std::vector<double>(5, 3.0)) == std::vector<double>(5, 0.0));
}

TEST_CASE("R-peaks of a two-beat window") {
    auto ecg = zeros(2.5);
    gauss(ecg, 0.4, 0.01, 1.0);
    gauss(ecg, 1.25, 0.01, 1.0);
    const auto p = detect_r_peaks(min_max_scale(ecg), kFs);
    REQUIRE(p.size() == 2);
    CHECK(std::abs(p[0] - 0.4) <= 1.0 / kFs);
    CHECK(std::abs(p[1] - 1.25) <= 1.0 / kFs);
}

TEST_CASE("flat ECG has no R-peak") {
    CHECK_ERROR_CODE(detect_r_peaks(zeros(2.5), kFs), ErrorCode::NoRPeak);
}

TEST_CASE("shallow tall T-wave loses to the steep R-spike") {
    auto ecg = zeros(2.5);
    gauss(ecg, 0.5, 0.01, 1.0);
    gauss(ecg, 1.2, 0.08, 0.92);
    const auto p = detect_r_peaks(min_max_scale(ecg), kFs);
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p[0] - 0.5) <= 1.0 / kFs);
}

TEST_CASE("raised-cosine pulse fiducials") {
    auto ppg = zeros(2.5);
    pulse(ppg, 0.40, 0.12, 0.6);
    const auto f = detect_ppg_fiducials(ppg, kFs, 0.1);
    CHECK(std::abs(f.foot - 0.40) <= 0.005);
    CHECK(std::abs(f.max_slope - 0.46) <= 0.002);
    CHECK(std::abs(f.peak - 0.52) <= 0.002);
}

TEST_CASE("only the first of two pulses after the anchor is reported") {
    auto ppg = zeros(2.5);
    pulse(ppg, 0.40, 0.12, 0.5);
    pulse(ppg, 1.20, 0.12, 0.5);
    const auto f = detect_ppg_fiducials(ppg, kFs, 0.2);
    CHECK(f.peak == doctest::Approx(0.52).epsilon(0.005));
}

TEST_CASE("a rise already under way at the anchor is skipped") {
    auto ppg = zeros(2.5);
    pulse(ppg, 0.40, 0.12, 0.5);
    pulse(ppg, 1.20, 0.12, 0.5);
    const auto f = detect_ppg_fiducials(ppg, kFs, 0.45);
    CHECK(std::abs(f.foot - 1.20) <= 0.005);
}

TEST_CASE("decreasing PPG has no pulse") {
    std::vector<double> ppg(2500);
    for (std::size_t i = 0; i < ppg.size(); ++i) ppg[i] = 1.0 - double(i) / 2500.0;
    CHECK_ERROR_CODE(detect_ppg_fiducials(ppg, kFs, 0.0), ErrorCode::NoPulseFound);
}

TEST_CASE("S1 is the heart sound before the one closest to the PPG peak") {
    auto pcg = zeros(1.0);
    SUBCASE("S1 built first") {
        burst(pcg, 0.10, 1.0);
        burst(pcg, 0.44, 0.7);
    }
    SUBCASE("S2 built first") {
        burst(pcg, 0.44, 0.7);
        burst(pcg, 0.10, 1.0);
    }
    CHECK(std::abs(detect_pcg_s1(min_max_scale(pcg), kFs, 0.52) - 0.10) <= 0.01);
}

TEST_CASE("one burst per cycle is ambiguous") {
    auto pcg = zeros(1.0);
    burst(pcg, 0.10, 1.0);
    CHECK_ERROR_CODE(detect_pcg_s1(min_max_scale(pcg), kFs, 0.52), ErrorCode::AmbiguousHeartSounds);
}

TEST_CASE("delineate_window on hand-built windows") {
    Window w;
    w.start = 10.0;
    auto ecg = zeros(2.5), ppg = zeros(2.5), pcg = zeros(2.5);
    for (double r : {0.2, 1.0, 1.8}) gauss(ecg, r, 0.01, 1.0);
    for (double r : {0.2, 1.0, 1.8}) pulse(ppg, r + 0.30, 0.12, 0.55);
    w.ecg = min_max_scale(ecg);
    w.ppg = min_max_scale(ppg);

    SUBCASE("clean") {
        for (double r : {0.2, 1.0, 1.8}) {
            burst(pcg, r + 0.06, 1.0);
            burst(pcg, r + 0.36, 0.7);
        }
        w.pcg = min_max_scale(pcg);
        const auto res = delineate_window(w, kFs);
        REQUIRE(std::holds_alternative<FiducialSet>(res));
        const auto f = std::get<FiducialSet>(res);
        CHECK(std::abs(f.r_peak - 10.2) <= 0.001);
        CHECK(std::abs(f.s1_peak - 10.26) <= 0.01);
        CHECK(std::abs(f.ppg_f - 10.5) <= 0.005);
        CHECK(std::abs(f.ppg_d - 10.56) <= 0.005);
        CHECK(std::abs(f.ppg_p - 10.62) <= 0.005);
        CHECK(f.ordered());
    }
    SUBCASE("zeroed PCG") {
        w.pcg = min_max_scale(pcg);
        const auto res = delineate_window(w, kFs);
        REQUIRE(std::holds_alternative<Rejection>(res));
        CHECK(std::get<Rejection>(res).reason == RejectReason::AmbiguousHeartSounds);
    }
    SUBCASE("S1 after the PPG foot") {
        for (double r : {0.2, 1.0, 1.8}) {
            burst(pcg, r + 0.33, 1.0);
            burst(pcg, r + 0.43, 0.7);
        }
        w.pcg = min_max_scale(pcg);
        const auto res = delineate_window(w, kFs);
        REQUIRE(std::holds_alternative<Rejection>(res));
        CHECK(std::get<Rejection>(res).reason == RejectReason::OrderingViolation);
    }
    SUBCASE("single R-peak") {
        auto one = zeros(2.5);
        gauss(one, 0.2, 0.01, 1.0);
        w.ecg = min_max_scale(one);
        w.pcg = min_max_scale(pcg);
        const auto res = delineate_window(w, kFs);
        REQUIRE(std::holds_alternative<Rejection>(res));
        CHECK(std::get<Rejection>(res).reason == RejectReason::NoCompleteCycle);
    }
}

TEST_CASE("noiseless synthetic windows match ground truth") {
    SynthConfig c;
    const auto s = generate_synthetic_session(c, 1);
    int rejected = 0;
    const auto found = delineate_synthetic(s, {}, &rejected);
    CHECK(found.size() >= 40);
    CHECK(rejected == 0);
    for (const auto& [b, f] : found) {
        CHECK(std::abs(f.r_peak - b->r) <= 1.0 / c.fs + 1e-9);
        CHECK(std::abs(f.s1_peak - b->s1) <= 0.010);
        CHECK(std::abs(f.ppg_f - b->ppg_f) <= 0.005);
        CHECK(std::abs(f.ppg_d - b->ppg_d) <= 0.005);
        CHECK(std::abs(f.ppg_p - b->ppg_p) <= 0.005);
        CHECK(f.ordered());
    }
}

TEST_CASE("R-peaks of a noiseless session are all recovered within one sample") {
    SynthConfig c;
    c.heart_rate = 68;
    const auto s = generate_synthetic_session(c, 1);
    const auto pre = preprocess_session(s.session);
    std::vector<CuffEvent> events;
    for (const auto& iv : s.truth.intervals) events.push_back({iv.t1, iv.t2, iv.t3});
    int matched = 0, expected = 0;
    for (const auto& iv : split_intervals(pre, events)) {
        for (const auto& w : split_windows(iv, pre)) {
            const auto peaks = detect_r_peaks(w.ecg, c.fs);
            for (const auto& b : s.truth.beats) {
                const double rel = b.r - w.start;
                if (rel < 0.05 || rel > w.duration - 0.05) continue;
                ++expected;
                for (double p : peaks)
                    if (std::abs(p - rel) <= 1.0 / c.fs + 1e-9) ++matched;
            }
        }
    }
    CHECK(expected > 100);
    CHECK(matched == expected);
}

TEST_CASE("noise of 0.02 moves no fiducial by more than 10 ms on most windows") {
    SynthConfig c;
    c.noise_std = 0.02;
    const auto s = generate_synthetic_session(c, 21);
    const auto found = delineate_synthetic(s, {});
    REQUIRE(found.size() >= 35);
    int good = 0;
    for (const auto& [b, f] : found) {
        const bool ok = std::abs(f.r_peak - b->r) <= 0.01 && std::abs(f.s1_peak - b->s1) <= 0.01 &&
                        std::abs(f.ppg_f - b->ppg_f) <= 0.01 && std::abs(f.ppg_d - b->ppg_d) <= 0.01 &&
                        std::abs(f.ppg_p - b->ppg_p) <= 0.01;
        good += ok;
        CHECK(f.ordered());
    }
    CHECK(good >= 0.95 * static_cast<double>(found.size()));
}

TEST_CASE("averaging over cycles stays close to the first cycle on steady rhythm") {
    SynthConfig c;
    const auto s = generate_synthetic_session(c, 1);
    DelineationOptions avg;
    avg.cycles = CycleMode::Average;
    const auto first = delineate_synthetic(s, {});
    const auto mean = delineate_synthetic(s, avg);
    REQUIRE(first.size() == mean.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        const auto& a = first[i].found;
        const auto& m = mean[i].found;
        CHECK(std::abs((a.ppg_f - a.s1_peak) - (m.ppg_f - m.s1_peak)) <= 0.003);
        CHECK(m.ordered());
    }
}
