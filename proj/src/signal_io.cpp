#include "pttbp/signal_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "json.hpp"
#include "pttbp/errors.hpp"
#include "pttbp/json_codec.hpp"

namespace pttbp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = line.find(',', pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(ErrorCode::MalformedFile, "line " + std::to_string(line_no) + ": not a number '" + std::string(s) + "'");
    return v;
}

void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

void check_positive(const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0)) fail(ErrorCode::InvalidArgument, std::string("meta.") + name + " must be positive");
}

}  // namespace

void RecordSession::validate() const {
    if (!(fs > 0.0) || !std::isfinite(fs)) fail(ErrorCode::BadSamplingRate, "fs must be positive");
    const auto n = ecg.size();
    if (ppg.size() != n || pcg.size() != n || fsr.size() != n)
        fail(ErrorCode::LengthMismatch, "channels differ in length (ecg " + std::to_string(ecg.size()) + ", ppg " +
                                            std::to_string(ppg.size()) + ", pcg " + std::to_string(pcg.size()) +
                                            ", fsr " + std::to_string(fsr.size()) + ")");
    if (static_cast<double>(n) < fs * 10.0)
        fail(ErrorCode::SignalTooShort, "session shorter than 10 s");
    for (const auto& bp : reference_bps)
        if (!(bp.sbp > bp.dbp && bp.dbp > 0.0))
            fail(ErrorCode::InvalidArgument, "reference BP must satisfy sbp > dbp > 0");
    check_positive(meta.age, "age");
    check_positive(meta.height, "height");
    check_positive(meta.weight, "weight");
    check_positive(meta.arm_length, "arm_length");
}

fs::path sidecar_path(const fs::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::IoFailure, "cannot write " + path.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) fail(ErrorCode::IoFailure, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoFailure, "cannot rename into " + path.string());
    }
}

RecordSession load_session(const fs::path& path, const LoadOptions& options) {
    const std::string text = read_file(path);
    std::string_view rest(text);

    std::optional<double> fs_header;
    std::vector<std::string_view> columns;
    std::vector<std::vector<double>> values;
    std::vector<bool> ended;
    std::size_t line_no = 0;

    while (!rest.empty()) {
        auto eol = rest.find('\n');
        std::string_view line = trim(rest.substr(0, eol));
        rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
        ++line_no;
        if (line.empty()) continue;

        if (line.front() == '#') {
            auto key = line.find("fs=");
            if (key != std::string_view::npos) fs_header = parse_number(trim(line.substr(key + 3)), line_no);
            continue;
        }
        if (columns.empty()) {
            columns = split_commas(line);
            values.resize(columns.size());
            ended.assign(columns.size(), false);
            continue;
        }
        auto cells = split_commas(line);
        if (cells.size() > columns.size())
            fail(ErrorCode::MalformedFile, "line " + std::to_string(line_no) + ": too many cells");
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c >= cells.size() || cells[c].empty()) {
                ended[c] = true;
                continue;
            }
            if (ended[c])
                fail(ErrorCode::MalformedFile, "line " + std::to_string(line_no) + ": gap in column " +
                                                   std::string(columns[c]));
            values[c].push_back(parse_number(cells[c], line_no));
        }
    }
    if (columns.empty()) fail(ErrorCode::MalformedFile, path.string() + ": no column header");

    auto take = [&](const std::string& name) -> std::vector<double> {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return std::move(values[c]);
        fail(ErrorCode::MalformedFile, path.string() + ": missing column '" + name + "'");
    };

    RecordSession s;
    s.fs = options.fs_override ? *options.fs_override : fs_header.value_or(0.0);
    if (!options.fs_override && !fs_header) fail(ErrorCode::MalformedFile, path.string() + ": missing '# fs=' header");
    if (!(s.fs > 0.0)) fail(ErrorCode::BadSamplingRate, path.string() + ": fs must be positive");

    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != options.time_column || values[c].size() < 2) continue;
        const double dt = values[c][1] - values[c][0];
        if (std::abs(dt * s.fs - 1.0) > 1e-6)
            fail(ErrorCode::BadSamplingRate, path.string() + ": time column disagrees with fs");
    }

    s.ecg = take(options.ecg_column);
    s.ppg = take(options.ppg_column);
    s.pcg = take(options.pcg_column);
    s.fsr = take(options.fsr_column);
    s.subject_id = path.stem().string();

    const auto side = sidecar_path(path);
    if (fs::exists(side)) {
        json j;
        try {
            j = json::parse(read_file(side));
            if (j.contains("subject_id")) s.subject_id = j.at("subject_id").get<std::string>();
            if (j.contains("reference_bps")) s.reference_bps = j.at("reference_bps").get<std::vector<BpReading>>();
            if (j.contains("meta")) s.meta = j.at("meta").get<SubjectMeta>();
        } catch (const json::exception& e) {
            fail(ErrorCode::MalformedFile, side.string() + ": " + e.what());
        }
    }
    s.validate();
    return s;
}

std::vector<std::string> save_session(const RecordSession& session, const fs::path& path) {
    session.validate();
    std::vector<std::string> warnings;
    if (session.reference_bps.empty())
        warnings.push_back("session '" + session.subject_id + "' has no reference BPs; it cannot be used for calibration");

    std::string out;
    out.reserve(session.size() * 64);
    out += "# fs=";
    append_number(out, session.fs);
    out += "\nt,ecg,ppg,pcg,fsr\n";
    for (std::size_t i = 0; i < session.size(); ++i) {
        append_number(out, static_cast<double>(i) / session.fs);
        out += ',';
        append_number(out, session.ecg[i]);
        out += ',';
        append_number(out, session.ppg[i]);
        out += ',';
        append_number(out, session.pcg[i]);
        out += ',';
        append_number(out, session.fsr[i]);
        out += '\n';
    }

    json side = {{"subject_id", session.subject_id},
                 {"reference_bps", session.reference_bps},
                 {"meta", session.meta}};
    write_file_atomic(path, out);
    write_file_atomic(sidecar_path(path), side.dump(2) + "\n");
    return warnings;
}

}  // namespace pttbp
