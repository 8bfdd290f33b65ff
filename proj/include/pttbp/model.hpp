#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace pttbp {

enum class Target { Sbp, Dbp };

// Distal fiducial (foot, max slope, systolic peak) crossed with proximal
// reference (ECG R-peak for PAT, PCG S1 for PTT).
enum class TimingIndex { PatF, PatD, PatP, PttF, PttD, PttP };

inline constexpr std::array<TimingIndex, 6> kAllIndices = {
    TimingIndex::PatF, TimingIndex::PatD, TimingIndex::PatP,
    TimingIndex::PttF, TimingIndex::PttD, TimingIndex::PttP};
inline constexpr std::array<Target, 2> kAllTargets = {Target::Sbp, Target::Dbp};

std::string_view to_string(Target t);
std::string_view to_string(TimingIndex i);
std::optional<Target> parse_target(std::string_view s);
std::optional<TimingIndex> parse_index(std::string_view s);

// BP = a0 + sqrt(a1 + a2 / t^2), t in seconds.
struct BpModel {
    double a0 = 0.0;  // mmHg
    double a1 = 0.0;  // mmHg^2
    double a2 = 0.0;  // mmHg^2 s^2
    Target target = Target::Sbp;
    TimingIndex index = TimingIndex::PttP;
};

struct BpReading {
    double sbp = 0.0;
    double dbp = 0.0;

    bool operator==(const BpReading&) const = default;
};

}  // namespace pttbp
