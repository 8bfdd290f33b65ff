// Command-line front end: synthetic cohorts, feature extraction, per-subject
// calibration and leave-one-out evaluation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pttbp/errors.hpp"
#include "pttbp/json_codec.hpp"
#include "pttbp/pipeline.hpp"
#include "pttbp/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pttbp;

namespace {

struct Flags {
    PipelineConfig pipeline;
    std::string index = "pat_p";
    std::string target = "sbp";
    std::string span = "between-t3";
    std::string cycles = "first";
    bool plain_gd = false;
};

void add_pipeline_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--window-s", f.pipeline.window_s, "Delineation window length (s)")->capture_default_str();
    cmd->add_option("--median-ms", f.pipeline.median_ms, "Median filter window (ms)")->capture_default_str();
    cmd->add_option("--span", f.span, "Usable span of an interval")
        ->check(CLI::IsMember({"between-t3", "pre-t1"}))
        ->capture_default_str();
    cmd->add_option("--cycles", f.cycles, "Cycles delineated per window")
        ->check(CLI::IsMember({"first", "average"}))
        ->capture_default_str();
    cmd->add_option("--trim", f.pipeline.trim_fraction, "Trimmed-mean fraction for interval averaging")
        ->capture_default_str();
}

void add_fit_flags(CLI::App* cmd, Flags& f, bool with_selection) {
    cmd->add_option("--lr", f.pipeline.gd.learning_rate, "Gradient descent learning rate")->capture_default_str();
    cmd->add_option("--max-iters", f.pipeline.gd.max_iterations, "Gradient descent iteration budget")
        ->capture_default_str();
    cmd->add_option("--tol", f.pipeline.gd.tolerance, "Relative loss change that stops the descent")
        ->capture_default_str();
    cmd->add_flag("--plain-gd", f.plain_gd, "Fixed-rate gradient descent without preconditioning");
    if (!with_selection) return;
    cmd->add_option("--index", f.index, "Timing index")
        ->check(CLI::IsMember({"pat_f", "pat_d", "pat_p", "ptt_f", "ptt_d", "ptt_p"}))
        ->capture_default_str();
    cmd->add_option("--target", f.target, "BP target")->check(CLI::IsMember({"sbp", "dbp"}))->capture_default_str();
}

void resolve(Flags& f) {
    f.pipeline.index = *parse_index(f.index);
    f.pipeline.target = *parse_target(f.target);
    f.pipeline.segmentation.span = f.span == "pre-t1" ? SpanMode::PreT1 : SpanMode::BetweenT3;
    f.pipeline.delineation.cycles = f.cycles == "average" ? CycleMode::Average : CycleMode::First;
    f.pipeline.gd.preconditioned = !f.plain_gd;
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedFile, path.string() + ": " + e.what());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) fail(ErrorCode::IoFailure, "cannot create directory " + dir.string());
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

// Plot-data CSVs for the error histogram, Bland-Altman, regression and
// confidence-bin figures.
void write_plot_csvs(const fs::path& dir, const std::string& stem, const PooledReport& rep) {
    std::string errors = "error\n", regression = "target,estimate\n", ba = "mean,difference\n";
    for (const auto& r : rep.records) {
        errors += fmt(r.error) + "\n";
        regression += fmt(r.target_bp) + "," + fmt(r.estimated_bp) + "\n";
    }
    for (const auto& p : rep.bland_altman.points) ba += fmt(p.mean) + "," + fmt(p.difference) + "\n";

    std::map<long, int> counts;
    for (const auto& r : rep.records) ++counts[static_cast<long>(std::floor(r.error / 2.0))];
    std::string hist = "bin_low,bin_high,count\n";
    for (auto [b, c] : counts) hist += fmt(2.0 * b) + "," + fmt(2.0 * (b + 1)) + "," + std::to_string(c) + "\n";

    std::string bins = "low,high,n,mean_error,ci_half_width\n";
    for (const auto& b : rep.bins.bins)
        bins += fmt(b.low) + "," + fmt(b.high) + "," + std::to_string(b.n) + "," + fmt(b.mean_error) + "," +
                (b.ci_half_width ? fmt(*b.ci_half_width) : std::string()) + "\n";

    write_file_atomic(dir / (stem + "_errors.csv"), errors);
    write_file_atomic(dir / (stem + "_histogram.csv"), hist);
    write_file_atomic(dir / (stem + "_bland_altman.csv"), ba);
    write_file_atomic(dir / (stem + "_regression.csv"), regression);
    write_file_atomic(dir / (stem + "_confidence_bins.csv"), bins);
}

json report_json(const CohortEvaluation& ev, Target target, TimingIndex index) {
    json j = ev.pooled.metrics;
    j["index"] = to_string(index);
    j["target"] = to_string(target);
    j["bland_altman"] = ev.pooled.bland_altman;
    j["confidence_bins"] = ev.pooled.bins;
    j["skipped_folds"] = ev.pooled.skipped_folds;
    j["excluded_subjects"] = ev.excluded;
    json subjects = json::array();
    for (const auto& s : ev.subjects) {
        json e = {{"subject_id", s.subject_id}, {"records", s.records}};
        json skipped = json::array();
        for (const auto& k : s.skipped) skipped.push_back({{"interval", k.interval_index}, {"reason", k.reason}});
        e["skipped"] = skipped;
        if (s.records.size() >= 2) e["metrics"] = compute_metrics(s.records);
        subjects.push_back(std::move(e));
    }
    j["subjects"] = subjects;
    return j;
}

std::vector<SubjectPairs> extract_cohort(const fs::path& dir, const PipelineConfig& config, json& diagnostics) {
    std::vector<SubjectPairs> out;
    diagnostics = json::array();
    for (const auto& path : list_sessions(dir)) {
        const auto session = load_session(path);
        const auto res = extract_pairs(session, config);
        out.push_back({session.subject_id, res.pairs});
        diagnostics.push_back({{"subject_id", session.subject_id},
                               {"intervals", res.diagnostics},
                               {"warnings", res.warnings}});
        for (const auto& w : res.warnings) std::cerr << "warning: " << session.subject_id << ": " << w << "\n";
    }
    if (out.empty()) fail(ErrorCode::IoFailure, "no session CSVs in " + dir.string());
    return out;
}

int run_synth(const std::string& config_path, const fs::path& out_dir, std::uint64_t seed,
              std::optional<int> subjects, std::optional<double> noise, const std::string& truth_index) {
    CohortConfig cohort;
    if (!config_path.empty()) {
        try {
            cohort = read_json(config_path).get<CohortConfig>();
        } catch (const json::exception& e) {
            fail(ErrorCode::MalformedFile, config_path + ": " + e.what());
        }
    }
    if (subjects) cohort.n_subjects = *subjects;
    if (noise) cohort.noise_std = *noise;
    if (!truth_index.empty()) cohort.truth_index = *parse_index(truth_index);
    const auto configs = make_cohort_configs(cohort, seed);
    ensure_dir(out_dir);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto synth = generate_synthetic_session(configs[i], subject_seed(seed, static_cast<int>(i)));
        const auto csv = out_dir / (configs[i].subject_id + ".csv");
        for (const auto& w : save_session(synth.session, csv)) std::cerr << "warning: " << w << "\n";
        write_json(out_dir / (configs[i].subject_id + ".truth.json"), synth.truth);
    }
    json manifest = cohort;
    manifest["seed"] = seed;
    write_json(out_dir / "cohort.manifest.json", manifest);
    std::cout << "wrote " << configs.size() << " sessions to " << out_dir.string() << "\n";
    return 0;
}

int run_extract(const fs::path& session_path, const fs::path& out, const std::string& diag_path,
                const PipelineConfig& config) {
    const auto session = load_session(session_path);
    const auto res = extract_pairs(session, config);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    write_json(out, pairs_file_json(res.pairs));
    if (!diag_path.empty()) {
        json d = {{"subject_id", res.subject_id},
                  {"config", config},
                  {"events", res.events},
                  {"intervals", res.intervals},
                  {"interval_diagnostics", res.diagnostics},
                  {"windows", res.windows},
                  {"warnings", res.warnings}};
        write_json(diag_path, d);
    }
    std::cout << res.pairs.size() << " pairs from " << res.events.size() << " cuff events\n";
    return 0;
}

int run_fit(const fs::path& pairs_path, const fs::path& out, std::string subject_id, const PipelineConfig& config) {
    const auto subject = pairs_from_file_json(read_json(pairs_path), pairs_path.stem().string());
    if (subject_id.empty()) subject_id = subject.subject_id;
    const auto timed = select_pairs(subject.pairs, config.target, config.index);
    const auto fit = fit_model(timed, config.target, config.index, config.gd);
    write_json(out, model_file_json(subject_id, fit));
    std::cout << "final_loss " << fit.final_loss << " after " << fit.iterations_used << " iterations\n";
    return 0;
}

int run_evaluate(const fs::path& dir, const fs::path& out_dir, const PipelineConfig& config) {
    json diagnostics;
    const auto cohort = extract_cohort(dir, config, diagnostics);
    const auto ev = evaluate_cohort(cohort, config.target, config.index, config.gd);
    ensure_dir(out_dir);
    const std::string stem = std::string(to_string(config.index)) + "_" + std::string(to_string(config.target));
    json rep = report_json(ev, config.target, config.index);
    rep["config"] = config;
    write_json(out_dir / (stem + "_report.json"), rep);
    write_json(out_dir / "diagnostics.json", diagnostics);
    write_plot_csvs(out_dir, stem, ev.pooled);
    const auto& m = ev.pooled.metrics;
    std::printf("%s %s: n=%zu ME=%.2f MAE=%.2f STD=%.2f r=%s\n", std::string(to_string(config.index)).c_str(),
                std::string(to_string(config.target)).c_str(), m.n, m.me, m.mae, m.std,
                m.r ? fmt(*m.r).substr(0, 6).c_str() : "n/a");
    return 0;
}

// Every index/target combination in one table.
int run_report(const fs::path& dir, const fs::path& out_dir, const PipelineConfig& config) {
    json diagnostics;
    const auto cohort = extract_cohort(dir, config, diagnostics);
    ensure_dir(out_dir);
    json table = json::array();
    std::string csv = "index,target,n,me,mae,std,r,within_10mmhg\n";
    for (auto index : kAllIndices) {
        for (auto target : kAllTargets) {
            const auto ev = evaluate_cohort(cohort, target, index, config.gd);
            const std::string stem = std::string(to_string(index)) + "_" + std::string(to_string(target));
            json row = report_json(ev, target, index);
            row.erase("subjects");
            table.push_back(row);
            write_plot_csvs(out_dir, stem, ev.pooled);
            const auto& m = ev.pooled.metrics;
            csv += std::string(to_string(index)) + "," + std::string(to_string(target)) + "," + std::to_string(m.n) +
                   "," + fmt(m.me) + "," + fmt(m.mae) + "," + fmt(m.std) + "," + (m.r ? fmt(*m.r) : "") + "," +
                   fmt(m.within_10mmhg) + "\n";
        }
    }
    write_json(out_dir / "table.json", {{"config", config}, {"rows", table}});
    write_file_atomic(out_dir / "table.csv", csv);
    write_json(out_dir / "diagnostics.json", diagnostics);
    std::cout << csv;
    return 0;
}

int exit_code(ErrorCode code) { return 10 + static_cast<int>(code); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cuff-less blood pressure estimation from PTT/PAT"};
    app.require_subcommand(1);

    Flags flags;

    std::string synth_config;
    std::string synth_out;
    std::uint64_t seed = 1;
    std::optional<int> synth_subjects;
    std::optional<double> synth_noise;
    std::string truth_index;
    auto* synth = app.add_subcommand("synth", "Write a synthetic cohort with ground truth");
    synth->add_option("--config", synth_config, "Cohort configuration JSON");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", seed, "Random seed")->capture_default_str();
    synth->add_option("--subjects", synth_subjects, "Override the number of subjects");
    synth->add_option("--noise", synth_noise, "Override the noise level (fraction of amplitude)");
    synth->add_option("--truth-index", truth_index, "Timing index that drives the reference BPs")
        ->check(CLI::IsMember({"pat_f", "pat_d", "pat_p", "ptt_f", "ptt_d", "ptt_p"}));

    std::string session_path, pairs_out, diag_out;
    auto* extract = app.add_subcommand("extract", "Extract calibration pairs from one session");
    extract->add_option("session", session_path, "Session CSV")->required();
    extract->add_option("--out", pairs_out, "Pairs JSON output")->required();
    extract->add_option("--diagnostics", diag_out, "Diagnostics JSON output");
    add_pipeline_flags(extract, flags);

    std::string pairs_in, model_out, subject_id;
    auto* fit = app.add_subcommand("fit", "Fit a per-subject BP model to calibration pairs");
    fit->add_option("pairs", pairs_in, "Pairs JSON")->required();
    fit->add_option("--out", model_out, "Model JSON output")->required();
    fit->add_option("--subject-id", subject_id, "Subject id recorded in the model file");
    add_fit_flags(fit, flags, true);

    std::string cohort_dir, report_dir;
    auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out evaluation of a cohort directory");
    evaluate->add_option("cohort", cohort_dir, "Directory of session CSVs")->required();
    evaluate->add_option("--out-dir", report_dir, "Report output directory")->required();
    add_pipeline_flags(evaluate, flags);
    add_fit_flags(evaluate, flags, true);

    auto* report = app.add_subcommand("report", "Evaluate every index/target combination");
    report->add_option("cohort", cohort_dir, "Directory of session CSVs")->required();
    report->add_option("--out-dir", report_dir, "Report output directory")->required();
    add_pipeline_flags(report, flags);
    add_fit_flags(report, flags, false);

    CLI11_PARSE(app, argc, argv);
    resolve(flags);

    try {
        if (*synth) return run_synth(synth_config, synth_out, seed, synth_subjects, synth_noise, truth_index);
        if (*extract) return run_extract(session_path, pairs_out, diag_out, flags.pipeline);
        if (*fit) return run_fit(pairs_in, model_out, subject_id, flags.pipeline);
        if (*evaluate) return run_evaluate(cohort_dir, report_dir, flags.pipeline);
        if (*report) return run_report(cohort_dir, report_dir, flags.pipeline);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
