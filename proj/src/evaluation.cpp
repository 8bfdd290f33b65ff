#include "pttbp/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

constexpr double kZ95 = 1.96;

struct Moments {
    double mean = 0.0;
    double sd = 0.0;  // population
};

template <typename F>
Moments moments(std::span<const LooRecord> xs, F get) {
    Moments m;
    const double n = static_cast<double>(xs.size());
    for (const auto& x : xs) m.mean += get(x);
    m.mean /= n;
    double ss = 0.0;
    for (const auto& x : xs) ss += (get(x) - m.mean) * (get(x) - m.mean);
    m.sd = std::sqrt(ss / n);
    return m;
}

}  // namespace

LooResult leave_one_out(const std::vector<CalibrationPair>& pairs, Target target, TimingIndex index,
                        const GdConfig& config) {
    if (pairs.size() < 4) fail(ErrorCode::TooFewPairs, "leave-one-out needs at least four pairs");
    const auto all = select_pairs(pairs, target, index);

    LooResult out;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        std::vector<TimedBp> train;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (j != k) train.push_back(all[j]);
        try {
            auto fit = fit_model(train, target, index, config);
            const double est = estimate_bp(fit.model, all[k].t);
            out.records.push_back({pairs[k].interval_index, all[k].bp, est, est - all[k].bp});
            out.fits.push_back(std::move(fit));
        } catch (const Error& e) {
            out.skipped.push_back({pairs[k].interval_index, e.what()});
        }
    }
    return out;
}

MetricsReport compute_metrics(std::span<const LooRecord> results) {
    if (results.size() < 2) fail(ErrorCode::TooFewPoints, "metrics need at least two estimates");
    MetricsReport m;
    m.n = results.size();
    const auto err = moments(results, [](const LooRecord& r) { return r.error; });
    m.me = err.mean;
    m.std = err.sd;
    std::size_t within = 0;
    for (const auto& r : results) {
        m.mae += std::abs(r.error);
        if (std::abs(r.error) <= 10.0) ++within;
    }
    m.mae /= static_cast<double>(m.n);
    m.within_10mmhg = static_cast<double>(within) / static_cast<double>(m.n);

    const auto tgt = moments(results, [](const LooRecord& r) { return r.target_bp; });
    const auto est = moments(results, [](const LooRecord& r) { return r.estimated_bp; });
    if (tgt.sd > 0.0 && est.sd > 0.0) {
        double cov = 0.0;
        for (const auto& r : results) cov += (r.target_bp - tgt.mean) * (r.estimated_bp - est.mean);
        cov /= static_cast<double>(m.n);
        m.r = std::clamp(cov / (tgt.sd * est.sd), -1.0, 1.0);
    }
    return m;
}

BlandAltman bland_altman(std::span<const LooRecord> results) {
    if (results.size() < 2) fail(ErrorCode::TooFewPoints, "Bland-Altman needs at least two estimates");
    const auto err = moments(results, [](const LooRecord& r) { return r.error; });
    BlandAltman ba;
    ba.mean_error = err.mean;
    ba.std = err.sd;
    ba.upper_limit = err.mean + kZ95 * err.sd;
    ba.lower_limit = err.mean - kZ95 * err.sd;
    for (const auto& r : results) ba.points.push_back({0.5 * (r.target_bp + r.estimated_bp), r.error});
    return ba;
}

ConfidenceBins confidence_bins(std::span<const LooRecord> results, double bin_width) {
    if (!(bin_width > 0.0)) fail(ErrorCode::InvalidArgument, "bin width must be positive");
    ConfidenceBins out;
    out.bin_width = bin_width;
    if (results.empty()) return out;

    auto bin_of = [&](double v) { return static_cast<long>(std::floor(v / bin_width)); };
    long lo = bin_of(results.front().target_bp), hi = lo;
    for (const auto& r : results) {
        lo = std::min(lo, bin_of(r.target_bp));
        hi = std::max(hi, bin_of(r.target_bp));
    }
    for (long b = lo; b <= hi; ++b) {
        std::vector<LooRecord> members;
        for (const auto& r : results)
            if (bin_of(r.target_bp) == b) members.push_back(r);
        ConfidenceBin bin;
        bin.low = static_cast<double>(b) * bin_width;
        bin.high = bin.low + bin_width;
        bin.n = members.size();
        if (!members.empty()) {
            const auto m = moments(members, [](const LooRecord& r) { return r.error; });
            bin.mean_error = m.mean;
            if (bin.n >= 2) bin.ci_half_width = kZ95 * m.sd / std::sqrt(static_cast<double>(bin.n));
        }
        out.bins.push_back(bin);
    }
    return out;
}

PooledReport pooled_report(const std::vector<LooResult>& subjects) {
    if (subjects.empty()) fail(ErrorCode::TooFewPoints, "no subjects to pool");
    // Pool in a canonical order so the report does not depend on the order
    // subjects were supplied in.
    std::vector<const LooResult*> order;
    for (const auto& s : subjects) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const LooResult* a, const LooResult* b) { return a->subject_id < b->subject_id; });

    PooledReport rep;
    for (const auto* s : order) {
        rep.records.insert(rep.records.end(), s->records.begin(), s->records.end());
        rep.skipped_folds += s->skipped.size();
    }
    rep.metrics = compute_metrics(rep.records);
    rep.bland_altman = bland_altman(rep.records);
    rep.bins = confidence_bins(rep.records);
    return rep;
}

}  // namespace pttbp
