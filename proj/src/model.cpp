#include "pttbp/model.hpp"

namespace pttbp {

std::string_view to_string(Target t) { return t == Target::Sbp ? "sbp" : "dbp"; }

std::string_view to_string(TimingIndex i) {
    switch (i) {
        case TimingIndex::PatF: return "pat_f";
        case TimingIndex::PatD: return "pat_d";
        case TimingIndex::PatP: return "pat_p";
        case TimingIndex::PttF: return "ptt_f";
        case TimingIndex::PttD: return "ptt_d";
        case TimingIndex::PttP: return "ptt_p";
    }
    return "?";
}

std::optional<Target> parse_target(std::string_view s) {
    for (auto t : kAllTargets)
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::optional<TimingIndex> parse_index(std::string_view s) {
    for (auto i : kAllIndices)
        if (to_string(i) == s) return i;
    return std::nullopt;
}

}  // namespace pttbp
