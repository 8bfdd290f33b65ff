#pragma once

// nlohmann::json conversions for the on-disk and report formats.

#include <string>

#include "json.hpp"
#include "pttbp/calibration.hpp"
#include "pttbp/delineation.hpp"
#include "pttbp/evaluation.hpp"
#include "pttbp/features.hpp"
#include "pttbp/model.hpp"
#include "pttbp/pipeline.hpp"
#include "pttbp/segmentation.hpp"
#include "pttbp/signal_io.hpp"
#include "pttbp/synthetic.hpp"

namespace pttbp {

using nlohmann::json;

// [sbp, dbp]
void to_json(json& j, const BpReading& v);
void from_json(const json& j, BpReading& v);

void to_json(json& j, const SubjectMeta& v);
void from_json(const json& j, SubjectMeta& v);

void to_json(json& j, const BpModel& v);
void from_json(const json& j, BpModel& v);

// { "interval": k, "ptt": {"f","d","p"}, "pat": {...}, "sbp", "dbp" }
void to_json(json& j, const CalibrationPair& v);
void from_json(const json& j, CalibrationPair& v);
void to_json(json& j, const TimingFeatures& v);

void to_json(json& j, const CuffEvent& v);
void to_json(json& j, const MeasurementInterval& v);
void to_json(json& j, const FiducialSet& v);
void to_json(json& j, const WindowRecord& v);
void to_json(json& j, const IntervalDiagnostics& v);

void to_json(json& j, const LooRecord& v);
void to_json(json& j, const MetricsReport& v);
void to_json(json& j, const BlandAltman& v);
void to_json(json& j, const ConfidenceBins& v);

void to_json(json& j, const GdConfig& v);
void to_json(json& j, const PipelineConfig& v);

void to_json(json& j, const IntervalTruth& v);
void to_json(json& j, const BeatTruth& v);
void to_json(json& j, const GroundTruth& v);

void to_json(json& j, const CohortConfig& v);
void from_json(const json& j, CohortConfig& v);

// Model file: subject, target, index, coefficients and a "fit" summary.
json model_file_json(const std::string& subject_id, const FitReport& fit);
BpModel model_from_file_json(const json& j);

// Pairs file: a JSON array of pairs. The reader also accepts an object with
// "subject_id" and "pairs".
json pairs_file_json(const std::vector<CalibrationPair>& pairs);
SubjectPairs pairs_from_file_json(const json& j, const std::string& fallback_id);

}  // namespace pttbp
