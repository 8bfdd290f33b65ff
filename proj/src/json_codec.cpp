#include "pttbp/json_codec.hpp"

#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
    if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

template <typename T>
void get_if(const json& j, const char* key, T& v) {
    if (j.contains(key)) v = j.at(key).get<T>();
}

Target target_from(const json& j) {
    auto t = parse_target(j.get<std::string>());
    if (!t) fail(ErrorCode::MalformedFile, "unknown target " + j.dump());
    return *t;
}

TimingIndex index_from(const json& j) {
    auto i = parse_index(j.get<std::string>());
    if (!i) fail(ErrorCode::MalformedFile, "unknown index " + j.dump());
    return *i;
}

}  // namespace

void to_json(json& j, const BpReading& v) { j = json::array({v.sbp, v.dbp}); }

void from_json(const json& j, BpReading& v) {
    if (!j.is_array() || j.size() != 2) throw json::type_error::create(302, "BP reading must be [sbp, dbp]", &j);
    v.sbp = j[0].get<double>();
    v.dbp = j[1].get<double>();
}

void to_json(json& j, const SubjectMeta& v) {
    j = json::object();
    put_optional(j, "age", v.age);
    put_optional(j, "height", v.height);
    put_optional(j, "weight", v.weight);
    put_optional(j, "arm_length", v.arm_length);
    if (v.sex) j["sex"] = *v.sex == Sex::Male ? "male" : "female";
}

void from_json(const json& j, SubjectMeta& v) {
    get_optional(j, "age", v.age);
    get_optional(j, "height", v.height);
    get_optional(j, "weight", v.weight);
    get_optional(j, "arm_length", v.arm_length);
    if (j.contains("sex") && j.at("sex").is_string()) {
        const auto s = j.at("sex").get<std::string>();
        if (s == "male" || s == "m" || s == "M")
            v.sex = Sex::Male;
        else if (s == "female" || s == "f" || s == "F")
            v.sex = Sex::Female;
    }
}

void to_json(json& j, const BpModel& v) {
    j = {{"target", to_string(v.target)}, {"index", to_string(v.index)}, {"a0", v.a0}, {"a1", v.a1}, {"a2", v.a2}};
}

void from_json(const json& j, BpModel& v) {
    v.a0 = j.at("a0").get<double>();
    v.a1 = j.at("a1").get<double>();
    v.a2 = j.at("a2").get<double>();
    if (j.contains("target")) v.target = target_from(j.at("target"));
    if (j.contains("index")) v.index = index_from(j.at("index"));
}

void to_json(json& j, const TimingFeatures& v) {
    j = {{"ptt", {{"f", v.ptt_f}, {"d", v.ptt_d}, {"p", v.ptt_p}}},
         {"pat", {{"f", v.pat_f}, {"d", v.pat_d}, {"p", v.pat_p}}}};
}

void to_json(json& j, const CalibrationPair& v) {
    j = v.features;
    j["interval"] = v.interval_index;
    j["sbp"] = v.sbp;
    j["dbp"] = v.dbp;
}

void from_json(const json& j, CalibrationPair& v) {
    v.interval_index = j.at("interval").get<int>();
    const auto& ptt = j.at("ptt");
    const auto& pat = j.at("pat");
    v.features.ptt_f = ptt.at("f").get<double>();
    v.features.ptt_d = ptt.at("d").get<double>();
    v.features.ptt_p = ptt.at("p").get<double>();
    v.features.pat_f = pat.at("f").get<double>();
    v.features.pat_d = pat.at("d").get<double>();
    v.features.pat_p = pat.at("p").get<double>();
    v.sbp = j.at("sbp").get<double>();
    v.dbp = j.at("dbp").get<double>();
}

void to_json(json& j, const CuffEvent& v) { j = {{"t1", v.t1}, {"t2", v.t2}, {"t3", v.t3}}; }

void to_json(json& j, const MeasurementInterval& v) {
    j = {{"index", v.index},
         {"start", v.start},
         {"end", v.end},
         {"cuff_start", v.cuff_start},
         {"usable_start", v.usable_start},
         {"usable_end", v.usable_end},
         {"reference_bp", v.reference_bp}};
}

void to_json(json& j, const FiducialSet& v) {
    j = {{"r_peak", v.r_peak}, {"s1_peak", v.s1_peak}, {"ppg_f", v.ppg_f}, {"ppg_d", v.ppg_d}, {"ppg_p", v.ppg_p}};
}

void to_json(json& j, const WindowRecord& v) {
    j = {{"interval", v.interval}, {"start", v.start}, {"accepted", v.fiducials.has_value()}};
    if (v.fiducials) j["fiducials"] = *v.fiducials;
    if (v.features) j["features"] = *v.features;
    if (v.reason) {
        j["reason"] = to_string(*v.reason);
        j["detail"] = v.detail;
    }
}

void to_json(json& j, const IntervalDiagnostics& v) {
    j = {{"index", v.index},           {"usable_start", v.usable_start}, {"usable_end", v.usable_end},
         {"accepted", v.accepted},     {"rejected", v.rejected},         {"reasons", v.reasons},
         {"dropped", v.dropped}};
}

void to_json(json& j, const LooRecord& v) {
    j = {{"interval", v.interval_index}, {"target", v.target_bp}, {"estimate", v.estimated_bp}, {"error", v.error}};
}

void to_json(json& j, const MetricsReport& v) {
    j = {{"me", v.me}, {"mae", v.mae}, {"std", v.std}, {"n", v.n}, {"within_10mmhg", v.within_10mmhg}};
    j["r"] = v.r ? json(*v.r) : json(nullptr);
}

void to_json(json& j, const BlandAltman& v) {
    j = {{"mean_error", v.mean_error},
         {"std", v.std},
         {"upper_limit", v.upper_limit},
         {"lower_limit", v.lower_limit}};
}

void to_json(json& j, const ConfidenceBins& v) {
    j = json::array();
    for (const auto& b : v.bins) {
        json e = {{"low", b.low}, {"high", b.high}, {"n", b.n}, {"mean_error", b.mean_error}};
        e["ci_half_width"] = b.ci_half_width ? json(*b.ci_half_width) : json(nullptr);
        e["insufficient"] = b.n < 2;
        j.push_back(std::move(e));
    }
}

void to_json(json& j, const GdConfig& v) {
    j = {{"learning_rate", v.learning_rate},
         {"max_iterations", v.max_iterations},
         {"tolerance", v.tolerance},
         {"preconditioned", v.preconditioned}};
}

void to_json(json& j, const PipelineConfig& v) {
    j = {{"window_s", v.window_s},
         {"median_ms", v.median_ms},
         {"gd", v.gd},
         {"index", to_string(v.index)},
         {"target", to_string(v.target)},
         {"span", v.segmentation.span == SpanMode::BetweenT3 ? "between-t3" : "pre-t1"},
         {"cycles", v.delineation.cycles == CycleMode::First ? "first" : "average"},
         {"trim_fraction", v.trim_fraction}};
}

void to_json(json& j, const IntervalTruth& v) {
    j = {{"t1", v.t1},       {"t2", v.t2},       {"t3", v.t3},       {"ptt_f", v.ptt_f}, {"ptt_d", v.ptt_d},
         {"ptt_p", v.ptt_p}, {"pat_f", v.pat_f}, {"pat_d", v.pat_d}, {"pat_p", v.pat_p}, {"bp", v.bp}};
}

void to_json(json& j, const BeatTruth& v) {
    j = {{"r", v.r},         {"s1", v.s1},       {"s2", v.s2},      {"ppg_f", v.ppg_f},
         {"ppg_d", v.ppg_d}, {"ppg_p", v.ppg_p}, {"interval", v.interval}};
}

void to_json(json& j, const GroundTruth& v) {
    j = {{"model_sbp", v.model_sbp}, {"model_dbp", v.model_dbp}, {"intervals", v.intervals}, {"beats", v.beats}};
}

void to_json(json& j, const CohortConfig& v) {
    j = {{"n_subjects", v.n_subjects},       {"fs", v.fs},
         {"noise_std", v.noise_std},         {"min_intervals", v.min_intervals},
         {"max_intervals", v.max_intervals}, {"heart_rate_lo", v.heart_rate_lo},
         {"heart_rate_hi", v.heart_rate_hi}, {"pep_lo", v.pep_lo},
         {"pep_hi", v.pep_hi},               {"ptt_lo", v.ptt_lo},
         {"ptt_hi", v.ptt_hi},               {"ptt_span", v.ptt_span},
         {"n_beats", v.n_beats},             {"truth_index", to_string(v.truth_index)}};
}

void from_json(const json& j, CohortConfig& v) {
    get_if(j, "n_subjects", v.n_subjects);
    get_if(j, "fs", v.fs);
    get_if(j, "noise_std", v.noise_std);
    get_if(j, "min_intervals", v.min_intervals);
    get_if(j, "max_intervals", v.max_intervals);
    get_if(j, "heart_rate_lo", v.heart_rate_lo);
    get_if(j, "heart_rate_hi", v.heart_rate_hi);
    get_if(j, "pep_lo", v.pep_lo);
    get_if(j, "pep_hi", v.pep_hi);
    get_if(j, "ptt_lo", v.ptt_lo);
    get_if(j, "ptt_hi", v.ptt_hi);
    get_if(j, "ptt_span", v.ptt_span);
    get_if(j, "n_beats", v.n_beats);
    if (j.contains("truth_index")) {
        const auto idx = parse_index(j.at("truth_index").get<std::string>());
        if (!idx) fail(ErrorCode::MalformedFile, "unknown truth_index");
        v.truth_index = *idx;
    }
}

json model_file_json(const std::string& subject_id, const FitReport& fit) {
    json j = fit.model;
    j["subject_id"] = subject_id;
    j["fit"] = {{"initial_loss", fit.initial_loss},
                {"final_loss", fit.final_loss},
                {"iterations", fit.iterations_used},
                {"converged", fit.converged},
                {"clamp_count", fit.clamp_count},
                {"a2_sign", fit.a2_sign}};
    return j;
}

BpModel model_from_file_json(const json& j) { return j.get<BpModel>(); }

json pairs_file_json(const std::vector<CalibrationPair>& pairs) { return json(pairs); }

SubjectPairs pairs_from_file_json(const json& j, const std::string& fallback_id) {
    SubjectPairs out;
    out.subject_id = fallback_id;
    try {
        if (j.is_array()) {
            out.pairs = j.get<std::vector<CalibrationPair>>();
        } else {
            if (j.contains("subject_id")) out.subject_id = j.at("subject_id").get<std::string>();
            out.pairs = j.at("pairs").get<std::vector<CalibrationPair>>();
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedFile, std::string("pairs file: ") + e.what());
    }
    return out;
}

}  // namespace pttbp
