#include <fstream>

#include "doctest.h"
#include "pttbp/signal_io.hpp"
#include "pttbp/synthetic.hpp"
#include "test_util.hpp"

using namespace pttbp;

namespace {

RecordSession small_session(std::size_t n, double fs = 1000.0) {
    RecordSession s;
    s.subject_id = "s1";
    s.fs = fs;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (auto* ch : {&s.ecg, &s.ppg, &s.pcg, &s.fsr}) {
        ch->resize(n);
        for (auto& v : *ch) v = g(rng) * 1e3;
    }
    s.reference_bps = {{120.5, 80.25}, {118.0, 79.0}};
    s.meta.age = 31;
    s.meta.sex = Sex::Female;
    return s;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("save then load reproduces samples bit for bit") {
    TempDir dir;
    const auto s = small_session(60000);
    const auto warnings = save_session(s, dir / "s1.csv");
    CHECK(warnings.empty());
    const auto back = load_session(dir / "s1.csv");
    CHECK(back.size() == 60000);
    CHECK(back.fs == s.fs);
    CHECK(back.ecg == s.ecg);
    CHECK(back.ppg == s.ppg);
    CHECK(back.pcg == s.pcg);
    CHECK(back.fsr == s.fsr);
    CHECK(back.reference_bps == s.reference_bps);
    CHECK(back.meta == s.meta);
    CHECK(back.subject_id == "s1");
}

TEST_CASE("round trip of a synthetic session") {
    TempDir dir;
    SynthConfig c;
    c.noise_std = 0.01;
    const auto s = generate_synthetic_session(c, 3).session;
    save_session(s, dir / "x.csv");
    const auto back = load_session(dir / "x.csv");
    CHECK(back.ecg == s.ecg);
    CHECK(back.fsr == s.fsr);
    CHECK(back.reference_bps == s.reference_bps);
}

TEST_CASE("empty reference BPs produce a warning but the file is written") {
    TempDir dir;
    auto s = small_session(12000);
    s.reference_bps.clear();
    const auto warnings = save_session(s, dir / "a.csv");
    CHECK(warnings.size() == 1);
    CHECK(std::filesystem::exists(dir / "a.csv"));
    CHECK(load_session(dir / "a.csv").reference_bps.empty());
}

TEST_CASE("unwritable path fails with IoFailure") {
    const auto s = small_session(12000);
    CHECK_ERROR_CODE(save_session(s, "/nonexistent_dir_pttbp/x/y.csv"), ErrorCode::IoFailure);
}

TEST_CASE("short ecg column is a length mismatch") {
    TempDir dir;
    std::string text = "# fs=100\nt,ecg,ppg,pcg,fsr\n";
    for (int i = 0; i < 1200; ++i) {
        const std::string t = std::to_string(i / 100.0);
        text += t + "," + (i < 1100 ? "1" : "") + ",2,3,4\n";
    }
    write_text(dir / "m.csv", text);
    CHECK_ERROR_CODE(load_session(dir / "m.csv"), ErrorCode::LengthMismatch);
}

TEST_CASE("schema and sampling-rate violations") {
    TempDir dir;
    SUBCASE("missing column") {
        write_text(dir / "a.csv", "# fs=100\nt,ecg,ppg,pcg\n0,1,2,3\n");
        CHECK_ERROR_CODE(load_session(dir / "a.csv"), ErrorCode::MalformedFile);
    }
    SUBCASE("non-numeric cell") {
        write_text(dir / "a.csv", "# fs=100\nt,ecg,ppg,pcg,fsr\n0,1,x,3,4\n");
        CHECK_ERROR_CODE(load_session(dir / "a.csv"), ErrorCode::MalformedFile);
    }
    SUBCASE("non-positive fs") {
        write_text(dir / "a.csv", "# fs=0\nt,ecg,ppg,pcg,fsr\n0,1,2,3,4\n");
        CHECK_ERROR_CODE(load_session(dir / "a.csv"), ErrorCode::BadSamplingRate);
    }
    SUBCASE("missing file") {
        CHECK_ERROR_CODE(load_session(dir / "none.csv"), ErrorCode::IoFailure);
    }
}

TEST_CASE("columns may appear in any order and be renamed") {
    TempDir dir;
    std::string text = "# fs=100\nFSR,PPG,time,ECG,PCG\n";
    for (int i = 0; i < 1100; ++i) text += "4,2," + std::to_string(i / 100.0) + ",1,3\n";
    write_text(dir / "r.csv", text);
    LoadOptions opt;
    opt.ecg_column = "ECG";
    opt.ppg_column = "PPG";
    opt.pcg_column = "PCG";
    opt.fsr_column = "FSR";
    opt.time_column = "time";
    const auto s = load_session(dir / "r.csv", opt);
    CHECK(s.size() == 1100);
    CHECK(s.ecg.front() == 1.0);
    CHECK(s.fsr.back() == 4.0);
    CHECK(s.subject_id == "r");
}

TEST_CASE("validate rejects short sessions and bad readings") {
    auto s = small_session(5000);
    CHECK_ERROR_CODE(s.validate(), ErrorCode::SignalTooShort);
    s = small_session(12000);
    s.reference_bps = {{70, 80}};
    CHECK_ERROR_CODE(s.validate(), ErrorCode::InvalidArgument);
    s = small_session(12000);
    s.meta.height = -1;
    CHECK_ERROR_CODE(s.validate(), ErrorCode::InvalidArgument);
    s = small_session(12000);
    s.fs = -5;
    CHECK_ERROR_CODE(s.validate(), ErrorCode::BadSamplingRate);
}
