#include "pttbp/pipeline.hpp"

#include <algorithm>
#include <future>

#include "pttbp/errors.hpp"
#include "pttbp/preprocess.hpp"

namespace pttbp {

namespace fs = std::filesystem;

RecordSession preprocess_session(const RecordSession& session, double median_ms) {
    session.validate();
    RecordSession out;
    out.subject_id = session.subject_id;
    out.fs = session.fs;
    out.reference_bps = session.reference_bps;
    out.meta = session.meta;

    // The four channels are independent.
    auto run = [&](const std::vector<double>& x, ChannelKind kind) {
        return std::async(std::launch::async, [&x, kind, &session, median_ms] {
            return preprocess_channel(x, kind, session.fs, median_ms);
        });
    };
    auto ecg = run(session.ecg, ChannelKind::Ecg);
    auto ppg = run(session.ppg, ChannelKind::Ppg);
    auto pcg = run(session.pcg, ChannelKind::Pcg);
    auto fsr = run(session.fsr, ChannelKind::Fsr);
    out.ecg = ecg.get();
    out.ppg = ppg.get();
    out.pcg = pcg.get();
    try {
        out.fsr = fsr.get();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConstantSignal) fail(ErrorCode::NoEventsFound, "FSR channel is flat");
        throw;
    }
    return out;
}

ExtractResult extract_pairs(const RecordSession& session, const PipelineConfig& config) {
    ExtractResult res;
    res.subject_id = session.subject_id;
    const auto pre = preprocess_session(session, config.median_ms);

    auto seg = config.segmentation;
    seg.min_usable_s = config.window_s;
    res.events = detect_cuff_events(pre.fsr, pre.fs, seg);
    res.intervals = split_intervals(pre, res.events, seg);

    std::vector<MeasurementInterval> kept;
    std::vector<TimingFeatures> aggregated;
    for (const auto& iv : res.intervals) {
        IntervalDiagnostics diag;
        diag.index = iv.index;
        diag.usable_start = iv.usable_start;
        diag.usable_end = iv.usable_end;

        std::vector<TimingFeatures> accepted;
        for (const auto& w : split_windows(iv, pre, config.window_s)) {
            WindowRecord rec;
            rec.interval = iv.index;
            rec.start = w.start;
            auto out = delineate_window(w, pre.fs, config.delineation);
            if (auto* f = std::get_if<FiducialSet>(&out)) {
                rec.fiducials = *f;
                rec.features = compute_window_features(*f);
                accepted.push_back(*rec.features);
                ++diag.accepted;
            } else {
                const auto& rej = std::get<Rejection>(out);
                rec.reason = rej.reason;
                rec.detail = rej.detail;
                ++diag.rejected;
                ++diag.reasons[std::string(to_string(rej.reason))];
            }
            res.windows.push_back(std::move(rec));
        }
        if (accepted.empty()) {
            diag.dropped = true;
            res.warnings.push_back("interval " + std::to_string(iv.index) + " dropped: every window was rejected");
        } else {
            kept.push_back(iv);
            aggregated.push_back(aggregate_interval(accepted, config.trim_fraction));
        }
        res.diagnostics.push_back(std::move(diag));
    }
    res.pairs = build_calibration_pairs(kept, aggregated);
    return res;
}

CohortEvaluation evaluate_cohort(const std::vector<SubjectPairs>& subjects, Target target, TimingIndex index,
                                 const GdConfig& gd) {
    CohortEvaluation out;
    std::vector<std::future<LooResult>> jobs;
    std::vector<const SubjectPairs*> included;
    for (const auto& s : subjects) {
        if (s.pairs.size() < 4) {
            out.excluded.push_back(s.subject_id);
            continue;
        }
        included.push_back(&s);
        jobs.push_back(std::async(std::launch::async, [&s, target, index, &gd] {
            auto r = leave_one_out(s.pairs, target, index, gd);
            r.subject_id = s.subject_id;
            return r;
        }));
    }
    for (auto& j : jobs) out.subjects.push_back(j.get());
    out.pooled = pooled_report(out.subjects);
    return out;
}

std::vector<fs::path> list_sessions(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) fail(ErrorCode::IoFailure, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") out.push_back(entry.path());
    if (ec) fail(ErrorCode::IoFailure, "cannot list " + dir.string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pttbp
