#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pttbp/model.hpp"
#include "pttbp/signal_io.hpp"

namespace pttbp {

// Parameters of a fully ground-truthed synthetic recording. Each of the
// n_intervals measurement intervals holds n_beats beats of calm signal
// followed by one trapezoidal cuff pulse on the FSR channel; the k-th
// interval's transit time is ptt_schedule[k].
struct SynthConfig {
    std::string subject_id = "synth";
    double fs = 1000.0;
    int n_beats = 25;             // beats in the cuff-free part of each interval
    double heart_rate = 75.0;     // bpm
    BpModel true_model_sbp{40.0, 0.0, 400.0, Target::Sbp, TimingIndex::PttF};
    BpModel true_model_dbp{30.0, 0.0, 121.0, Target::Dbp, TimingIndex::PttF};
    std::vector<double> ptt_schedule{0.20, 0.22, 0.24, 0.26, 0.28};  // s, S1 to PPG foot
    double pep_offset = 0.06;     // s, R-peak to S1
    double noise_std = 0.0;       // fraction of each channel's unit amplitude
    int n_intervals = 5;

    double ppg_rise_s = 0.12;     // foot to systolic peak
    double s2_delay_s = 0.30;     // S1 to S2
    double cuff_rise_s = 3.0;
    double cuff_plateau_s = 6.0;
    double cuff_fall_s = 10.0;
    double lead_out_s = 3.0;      // signal after the last cuff event

    SubjectMeta meta;

    // Throws InfeasibleConfig.
    void validate() const;
};

struct BeatTruth {
    double r = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double ppg_f = 0.0;
    double ppg_d = 0.0;
    double ppg_p = 0.0;
    int interval = 0;
};

struct IntervalTruth {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double ptt_f = 0.0, ptt_d = 0.0, ptt_p = 0.0;
    double pat_f = 0.0, pat_d = 0.0, pat_p = 0.0;
    BpReading bp;

    double value(TimingIndex index) const;
};

struct GroundTruth {
    std::vector<BeatTruth> beats;
    std::vector<IntervalTruth> intervals;
    BpModel model_sbp;
    BpModel model_dbp;
};

struct SyntheticSession {
    RecordSession session;
    GroundTruth truth;
};

// Deterministic for a given (config, seed). Throws InfeasibleConfig.
SyntheticSession generate_synthetic_session(const SynthConfig& config, std::uint64_t seed);

// Ranges used to draw a population of per-subject configurations.
struct CohortConfig {
    int n_subjects = 32;
    double fs = 1000.0;
    double noise_std = 0.0;
    int min_intervals = 5;
    int max_intervals = 6;
    double heart_rate_lo = 60.0, heart_rate_hi = 90.0;
    double pep_lo = 0.04, pep_hi = 0.08;
    double ptt_lo = 0.16, ptt_hi = 0.22;  // lowest PTT of a subject
    double ptt_span = 0.10;               // PTT spread within a subject
    int n_beats = 25;
    TimingIndex truth_index = TimingIndex::PttF;  // index the reference BPs are generated from

    void validate() const;
};

std::vector<SynthConfig> make_cohort_configs(const CohortConfig& cohort, std::uint64_t seed);

// Noise seed of the i-th subject of a cohort drawn with cohort_seed.
std::uint64_t subject_seed(std::uint64_t cohort_seed, int index);

}  // namespace pttbp
