#include "pttbp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pttbp/calibration.hpp"
#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

constexpr double kPi = std::numbers::pi;

// Waveform constants of the synthetic morphologies.
constexpr double kRSigma = 0.010;
constexpr double kTAmp = 0.25, kTSigma = 0.040;
constexpr double kPAmp = 0.12, kPSigma = 0.025;
constexpr double kS1Amp = 1.0, kS2Amp = 0.7, kBurstSigma = 0.015, kCarrierHz = 40.0;

void infeasible(const std::string& why) { fail(ErrorCode::InfeasibleConfig, why); }

struct SampleRange {
    std::size_t lo, hi;  // [lo, hi)
};

SampleRange support(double center, double half_width, double fs, std::size_t n) {
    const double a = std::ceil((center - half_width) * fs);
    const double b = std::floor((center + half_width) * fs) + 1.0;
    const auto lo = static_cast<std::size_t>(std::clamp(a, 0.0, static_cast<double>(n)));
    const auto hi = static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(n)));
    return {lo, std::max(lo, hi)};
}

void add_gaussian(std::vector<double>& x, double fs, double center, double amp, double sigma) {
    auto [lo, hi] = support(center, 6.0 * sigma, fs, x.size());
    for (auto i = lo; i < hi; ++i) {
        const double d = (static_cast<double>(i) / fs - center) / sigma;
        x[i] += amp * std::exp(-0.5 * d * d);
    }
}

void add_burst(std::vector<double>& x, double fs, double center, double amp) {
    auto [lo, hi] = support(center, 5.0 * kBurstSigma, fs, x.size());
    for (auto i = lo; i < hi; ++i) {
        const double dt = static_cast<double>(i) / fs - center;
        const double d = dt / kBurstSigma;
        x[i] += amp * std::exp(-0.5 * d * d) * std::cos(2.0 * kPi * kCarrierHz * dt);
    }
}

// Raised-cosine rise from foot to peak, then a decay that leaves the peak
// with zero slope and reaches the next foot with a small negative slope so
// the foot is a well-defined minimum.
void add_ppg_pulse(std::vector<double>& x, double fs, double foot, double rise, double next_foot) {
    const double peak = foot + rise;
    auto [lo, hi] = support(0.5 * (foot + next_foot), 0.5 * (next_foot - foot), fs, x.size());
    for (auto i = lo; i < hi; ++i) {
        const double t = static_cast<double>(i) / fs;
        if (t < foot || t >= next_foot) continue;
        if (t < peak) {
            x[i] += 0.5 * (1.0 - std::cos(kPi * (t - foot) / rise));
        } else {
            // Rounded crest mirroring the upstroke, then a slow diastolic tail.
            const double v = t - peak;
            const double u = v / (next_foot - peak);
            const double crest = v < rise ? 0.5 * (1.0 + std::cos(kPi * v / rise)) : 0.0;
            x[i] += 0.6 * crest + 0.4 * (1.0 - u * u);
        }
    }
}

void add_trapezoid(std::vector<double>& x, double fs, double t1, double rise, double t2, double t3) {
    auto [lo, hi] = support(0.5 * (t1 + t3), 0.5 * (t3 - t1), fs, x.size());
    for (auto i = lo; i < hi; ++i) {
        const double t = static_cast<double>(i) / fs;
        double v = 0.0;
        if (t < t1 + rise)
            v = (t - t1) / rise;
        else if (t < t2)
            v = 1.0;
        else
            v = (t3 - t) / (t3 - t2);
        x[i] += std::clamp(v, 0.0, 1.0);
    }
}

}  // namespace

double IntervalTruth::value(TimingIndex index) const {
    switch (index) {
        case TimingIndex::PatF: return pat_f;
        case TimingIndex::PatD: return pat_d;
        case TimingIndex::PatP: return pat_p;
        case TimingIndex::PttF: return ptt_f;
        case TimingIndex::PttD: return ptt_d;
        case TimingIndex::PttP: return ptt_p;
    }
    return 0.0;
}

void SynthConfig::validate() const {
    if (!(fs > 0.0)) infeasible("fs must be positive");
    if (n_intervals < 3) infeasible("n_intervals must be at least 3");
    if (static_cast<int>(ptt_schedule.size()) != n_intervals)
        infeasible("ptt_schedule needs exactly n_intervals entries");
    if (n_beats < 1) infeasible("n_beats must be positive");
    if (!(heart_rate > 0.0)) infeasible("heart_rate must be positive");
    if (!(pep_offset >= 0.0 && pep_offset <= 0.2)) infeasible("pep_offset must lie in [0, 0.2] s");
    if (!(noise_std >= 0.0)) infeasible("noise_std must be non-negative");
    if (!(ppg_rise_s > 0.0) || !(s2_delay_s > 0.0)) infeasible("ppg_rise_s and s2_delay_s must be positive");
    if (!(cuff_rise_s > 0.0 && cuff_plateau_s > 0.0 && cuff_fall_s > 0.0 && lead_out_s >= 0.0))
        infeasible("cuff durations must be positive");

    const double rr = 60.0 / heart_rate;
    for (double ptt : ptt_schedule) {
        if (!(ptt > 0.05 && ptt < 0.6)) infeasible("ptt_schedule values must lie in (0.05, 0.6) s");
        if (pep_offset + ptt + ppg_rise_s + 0.05 >= rr)
            infeasible("PPG systolic peak does not precede the next R-peak at this heart rate");
        if (!(s2_delay_s < 2.0 * (ptt + ppg_rise_s)))
            infeasible("S2 must be closer than S1 to the PPG systolic peak");
    }
    if (s2_delay_s + pep_offset + 0.1 >= rr) infeasible("S2 overlaps the next cardiac cycle");
    const auto [lo, hi] = std::minmax_element(ptt_schedule.begin(), ptt_schedule.end());
    if (rr - ppg_rise_s - (*hi - *lo) <= 0.02) infeasible("PTT schedule varies faster than one cardiac cycle allows");
}

SyntheticSession generate_synthetic_session(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    const double fs = config.fs;
    const double rr = 60.0 / config.heart_rate;

    GroundTruth truth;
    truth.model_sbp = config.true_model_sbp;
    truth.model_dbp = config.true_model_dbp;

    double start = 0.0;
    for (int k = 0; k < config.n_intervals; ++k) {
        IntervalTruth iv;
        iv.t1 = start + config.n_beats * rr;
        iv.t2 = iv.t1 + config.cuff_rise_s + config.cuff_plateau_s;
        iv.t3 = iv.t2 + config.cuff_fall_s;
        const double ptt = config.ptt_schedule[static_cast<std::size_t>(k)];
        iv.ptt_f = ptt;
        iv.ptt_d = ptt + 0.5 * config.ppg_rise_s;
        iv.ptt_p = ptt + config.ppg_rise_s;
        iv.pat_f = iv.ptt_f + config.pep_offset;
        iv.pat_d = iv.ptt_d + config.pep_offset;
        iv.pat_p = iv.ptt_p + config.pep_offset;
        try {
            iv.bp.sbp = estimate_bp(config.true_model_sbp, iv.value(config.true_model_sbp.index));
            iv.bp.dbp = estimate_bp(config.true_model_dbp, iv.value(config.true_model_dbp.index));
        } catch (const Error& e) {
            infeasible(std::string("true model undefined on the schedule: ") + e.what());
        }
        if (!(iv.bp.sbp > iv.bp.dbp && iv.bp.dbp > 0.0)) infeasible("true models must give sbp > dbp > 0");
        truth.intervals.push_back(iv);
        start = iv.t3;
    }

    const double total = start + config.lead_out_s;
    const auto n = static_cast<std::size_t>(std::floor(total * fs));
    if (static_cast<double>(n) < 10.0 * fs) infeasible("synthetic session shorter than 10 s");

    RecordSession s;
    s.subject_id = config.subject_id;
    s.fs = fs;
    s.meta = config.meta;
    s.ecg.assign(n, 0.0);
    s.ppg.assign(n, 0.0);
    s.pcg.assign(n, 0.0);
    s.fsr.assign(n, 0.0);

    auto interval_of = [&](double t) {
        for (std::size_t k = 0; k < truth.intervals.size(); ++k)
            if (t < truth.intervals[k].t3) return static_cast<int>(k);
        return static_cast<int>(truth.intervals.size()) - 1;
    };

    for (double r = 0.25; r < total; r += rr) {
        BeatTruth b;
        b.interval = interval_of(r);
        const double ptt = config.ptt_schedule[static_cast<std::size_t>(b.interval)];
        b.r = r;
        b.s1 = r + config.pep_offset;
        b.s2 = b.s1 + config.s2_delay_s;
        b.ppg_f = b.s1 + ptt;
        b.ppg_d = b.ppg_f + 0.5 * config.ppg_rise_s;
        b.ppg_p = b.ppg_f + config.ppg_rise_s;
        truth.beats.push_back(b);
    }

    const double t_wave = std::min(0.28, 0.45 * rr);
    const double p_wave = std::min(0.16, 0.2 * rr);
    for (std::size_t j = 0; j < truth.beats.size(); ++j) {
        const auto& b = truth.beats[j];
        add_gaussian(s.ecg, fs, b.r, 1.0, kRSigma);
        add_gaussian(s.ecg, fs, b.r + t_wave, kTAmp, kTSigma);
        add_gaussian(s.ecg, fs, b.r - p_wave, kPAmp, kPSigma);
        add_burst(s.pcg, fs, b.s1, kS1Amp);
        add_burst(s.pcg, fs, b.s2, kS2Amp);
        const double next_foot = j + 1 < truth.beats.size() ? truth.beats[j + 1].ppg_f : b.ppg_f + rr;
        add_ppg_pulse(s.ppg, fs, b.ppg_f, config.ppg_rise_s, next_foot);
    }
    for (const auto& iv : truth.intervals) {
        add_trapezoid(s.fsr, fs, iv.t1, config.cuff_rise_s, iv.t2, iv.t3);
        s.reference_bps.push_back(iv.bp);
    }

    if (config.noise_std > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, config.noise_std);
        for (auto* ch : {&s.ecg, &s.ppg, &s.pcg, &s.fsr})
            for (auto& v : *ch) v += noise(rng);
    }
    return {std::move(s), std::move(truth)};
}

void CohortConfig::validate() const {
    if (n_subjects < 1) infeasible("n_subjects must be positive");
    if (min_intervals < 3 || max_intervals < min_intervals) infeasible("interval count range invalid");
    if (!(heart_rate_lo > 0.0 && heart_rate_hi >= heart_rate_lo)) infeasible("heart rate range invalid");
    if (!(pep_lo >= 0.0 && pep_hi >= pep_lo)) infeasible("PEP range invalid");
    if (!(ptt_lo > 0.05 && ptt_hi >= ptt_lo && ptt_span >= 0.0)) infeasible("PTT range invalid");
}

namespace {

double is_pat(TimingIndex index) {
    return index == TimingIndex::PatF || index == TimingIndex::PatD || index == TimingIndex::PatP ? 1.0 : 0.0;
}

double index_delay(TimingIndex index, double rise) {
    switch (index) {
        case TimingIndex::PatD:
        case TimingIndex::PttD: return 0.5 * rise;
        case TimingIndex::PatP:
        case TimingIndex::PttP: return rise;
        default: return 0.0;
    }
}

}  // namespace

std::vector<SynthConfig> make_cohort_configs(const CohortConfig& cohort, std::uint64_t seed) {
    cohort.validate();
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    std::vector<SynthConfig> out;
    for (int i = 0; i < cohort.n_subjects; ++i) {
        SynthConfig c;
        char id[32];
        std::snprintf(id, sizeof(id), "subject_%02d", i + 1);
        c.subject_id = id;
        c.fs = cohort.fs;
        c.noise_std = cohort.noise_std;
        c.n_beats = cohort.n_beats;
        c.n_intervals = std::uniform_int_distribution<int>(cohort.min_intervals, cohort.max_intervals)(rng);
        c.heart_rate = uniform(cohort.heart_rate_lo, cohort.heart_rate_hi);
        c.pep_offset = uniform(cohort.pep_lo, cohort.pep_hi);

        const double lo = uniform(cohort.ptt_lo, cohort.ptt_hi);
        c.ptt_schedule.clear();
        for (int k = 0; k < c.n_intervals; ++k) c.ptt_schedule.push_back(lo + uniform(0.0, cohort.ptt_span));
        // Exercise raises BP first, recovery lowers it again.
        std::sort(c.ptt_schedule.begin(), c.ptt_schedule.end());
        std::shuffle(c.ptt_schedule.begin() + 1, c.ptt_schedule.end(), rng);

        const double shift = c.pep_offset * is_pat(cohort.truth_index) + index_delay(cohort.truth_index, c.ppg_rise_s);
        const double t_mid = lo + 0.5 * cohort.ptt_span + shift;
        auto draw_model = [&](Target target, double a0_lo, double a0_hi, double a1_mag, double bp_lo, double bp_hi) {
            BpModel m;
            m.target = target;
            m.index = cohort.truth_index;
            m.a0 = uniform(a0_lo, a0_hi);
            m.a1 = uniform(-a1_mag, a1_mag);
            const double root = uniform(bp_lo, bp_hi) - m.a0;
            m.a2 = (root * root - m.a1) * t_mid * t_mid;
            return m;
        };
        c.true_model_sbp = draw_model(Target::Sbp, 30.0, 50.0, 200.0, 120.0, 145.0);
        c.true_model_dbp = draw_model(Target::Dbp, 20.0, 35.0, 100.0, 70.0, 85.0);
        c.meta.age = uniform(21.0, 50.0);
        c.meta.height = uniform(155.0, 190.0);
        c.meta.weight = uniform(50.0, 95.0);
        c.meta.arm_length = uniform(55.0, 75.0);
        c.meta.sex = uniform(0.0, 1.0) < 0.75 ? Sex::Male : Sex::Female;
        out.push_back(std::move(c));
    }
    return out;
}

std::uint64_t subject_seed(std::uint64_t cohort_seed, int index) {
    std::uint64_t z = cohort_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace pttbp
