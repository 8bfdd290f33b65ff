#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pttbp/model.hpp"

namespace pttbp {

enum class Sex { Male, Female };

struct SubjectMeta {
    std::optional<double> age;         // years
    std::optional<double> height;      // cm
    std::optional<double> weight;      // kg
    std::optional<double> arm_length;  // cm
    std::optional<Sex> sex;

    bool operator==(const SubjectMeta&) const = default;
};

// One synchronized recording: four equal-length channels sampled at fs plus
// the cuff readings taken during it, in chronological order.
struct RecordSession {
    std::string subject_id;
    double fs = 1000.0;
    std::vector<double> ecg;
    std::vector<double> ppg;
    std::vector<double> pcg;
    std::vector<double> fsr;
    std::vector<BpReading> reference_bps;
    SubjectMeta meta;

    std::size_t size() const { return ecg.size(); }
    double duration() const { return static_cast<double>(size()) / fs; }

    // Throws BadSamplingRate, LengthMismatch, SignalTooShort or
    // InvalidArgument (bad BP / meta values).
    void validate() const;
};

// Column names of the on-disk CSV. Datasets with other layouts are loaded by
// remapping names here rather than by rewriting the files.
struct LoadOptions {
    std::string ecg_column = "ecg";
    std::string ppg_column = "ppg";
    std::string pcg_column = "pcg";
    std::string fsr_column = "fsr";
    std::string time_column = "t";
    std::optional<double> fs_override;
};

// Sidecar with subject id, reference BPs and metadata: "<stem>.json" next to
// the CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

RecordSession load_session(const std::filesystem::path& path, const LoadOptions& options = {});

// Writes the CSV and its sidecar. Returns non-fatal warnings.
std::vector<std::string> save_session(const RecordSession& session, const std::filesystem::path& path);

// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace pttbp
