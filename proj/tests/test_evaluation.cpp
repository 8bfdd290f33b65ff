#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pttbp/calibration.hpp"
#include "pttbp/evaluation.hpp"
#include "test_util.hpp"

using namespace pttbp;

namespace {

std::vector<LooRecord> records(const std::vector<double>& target, const std::vector<double>& est) {
    std::vector<LooRecord> out;
    for (std::size_t i = 0; i < target.size(); ++i)
        out.push_back({static_cast<int>(i), target[i], est[i], est[i] - target[i]});
    return out;
}

std::vector<CalibrationPair> pairs_from(const BpModel& m, const std::vector<double>& ts, TimingIndex index) {
    std::vector<CalibrationPair> out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        CalibrationPair p;
        p.interval_index = static_cast<int>(k);
        p.features.value(index) = ts[k];
        p.sbp = estimate_bp(m, ts[k]);
        p.dbp = p.sbp - 40;
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("perfect agreement") {
    const auto m = compute_metrics(records({100, 110, 120}, {100, 110, 120}));
    CHECK(m.me == 0);
    CHECK(m.mae == 0);
    CHECK(m.std == 0);
    REQUIRE(m.r);
    CHECK(*m.r == doctest::Approx(1.0));
    CHECK(m.within_10mmhg == 1.0);
}

TEST_CASE("three-point metrics fixture") {
    const std::vector<double> t{100, 110, 120}, e{101, 109, 122};
    const auto m = compute_metrics(records(t, e));
    CHECK(m.n == 3);
    CHECK(m.me == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.mae == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(m.std == doctest::Approx(std::sqrt(42.0 / 27.0)).epsilon(1e-15));
    REQUIRE(m.r);
    CHECK(*m.r == doctest::Approx(oracle::pearson(t, e)).epsilon(1e-14));
    CHECK(*m.r == doctest::Approx(210.0 / std::sqrt(200.0 * 674.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("constant targets leave r undefined") {
    const auto m = compute_metrics(records({100, 100, 100}, {99, 101, 104}));
    CHECK_FALSE(m.r.has_value());
    CHECK_ERROR_CODE(compute_metrics(records({100}, {101})), ErrorCode::TooFewPoints);
}

TEST_CASE("metric invariants on random data") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0, 5);
    for (int k = 0; k < 50; ++k) {
        std::vector<double> t, e;
        for (int i = 0; i < 20; ++i) {
            t.push_back(120 + 10 * g(rng));
            e.push_back(t.back() + g(rng) + 1.0);
        }
        const auto m = compute_metrics(records(t, e));
        CHECK(m.mae >= std::abs(m.me));
        CHECK(m.std >= 0);
        CHECK(m.within_10mmhg >= 0);
        CHECK(m.within_10mmhg <= 1);
    }
}

TEST_CASE("Bland-Altman limits") {
    const double mean = 0.12, sd = 6.15;
    const auto ba = bland_altman(records({100, 120}, {100 + mean + sd, 120 + mean - sd}));
    CHECK(ba.mean_error == doctest::Approx(mean).epsilon(1e-14));
    CHECK(ba.std == doctest::Approx(sd).epsilon(1e-14));
    CHECK(ba.upper_limit == doctest::Approx(0.12 + 1.96 * 6.15).epsilon(1e-14));
    CHECK(ba.lower_limit == doctest::Approx(0.12 - 1.96 * 6.15).epsilon(1e-14));
    REQUIRE(ba.points.size() == 2);
    CHECK(ba.points[0].mean == doctest::Approx(100 + (mean + sd) / 2));
    CHECK(ba.points[0].difference == doctest::Approx(mean + sd));

    const auto zero = bland_altman(records({100, 120, 130}, {100, 120, 130}));
    CHECK(zero.upper_limit == 0.0);
    CHECK(zero.lower_limit == 0.0);

    const auto sym = bland_altman(records({100, 120}, {103, 117}));
    CHECK(sym.mean_error == doctest::Approx(0.0));
    CHECK(sym.upper_limit == doctest::Approx(1.96 * 3));
    CHECK(sym.lower_limit == doctest::Approx(-1.96 * 3));
    CHECK_ERROR_CODE(bland_altman(records({100}, {101})), ErrorCode::TooFewPoints);
}

TEST_CASE("Bland-Altman limit width is 3.92 standard deviations") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 7);
    std::vector<double> t, e;
    for (int i = 0; i < 173; ++i) {
        t.push_back(120 + g(rng));
        e.push_back(t.back() + g(rng));
    }
    const auto ba = bland_altman(records(t, e));
    CHECK(std::abs((ba.upper_limit - ba.lower_limit) - 3.92 * ba.std) <= 1e-9);
}

TEST_CASE("confidence bins") {
    SUBCASE("single bin") {
        const auto b = confidence_bins(records({121, 123, 128}, {120, 125, 127}));
        REQUIRE(b.bins.size() == 1);
        CHECK(b.bins[0].n == 3);
        CHECK(b.bins[0].low == 120);
        CHECK(b.bins[0].high == 130);
    }
    SUBCASE("identical errors") {
        const auto b = confidence_bins(records({121, 123, 128}, {123, 125, 130}));
        REQUIRE(b.bins[0].ci_half_width);
        CHECK(*b.bins[0].ci_half_width == 0.0);
        CHECK(b.bins[0].mean_error == doctest::Approx(2.0));
    }
    SUBCASE("60 mmHg span") {
        std::vector<double> t, e;
        for (int i = 0; i < 60; ++i) {
            t.push_back(100 + i);
            e.push_back(100 + i + (i % 3) - 1);
        }
        const auto b = confidence_bins(records(t, e));
        CHECK(b.bins.size() == 6);
        std::size_t total = 0;
        for (const auto& bin : b.bins) {
            total += bin.n;
            REQUIRE(bin.ci_half_width);
            std::vector<double> errs;
            for (std::size_t i = 0; i < t.size(); ++i)
                if (t[i] >= bin.low && t[i] < bin.high) errs.push_back(e[i] - t[i]);
            CHECK(*bin.ci_half_width ==
                  doctest::Approx(1.96 * oracle::pop_sd(errs) / std::sqrt(double(errs.size()))));
        }
        CHECK(total == 60);
    }
    SUBCASE("lone sample has no interval") {
        const auto b = confidence_bins(records({101, 135}, {100, 136}));
        REQUIRE(b.bins.size() == 4);
        CHECK(b.bins[0].n == 1);
        CHECK_FALSE(b.bins[0].ci_half_width);
        CHECK(b.bins[1].n == 0);
    }
}

TEST_CASE("leave-one-out fold count and accuracy") {
    const BpModel m{38, 20, 450};
    const auto pairs = pairs_from(m, {0.20, 0.27, 0.22, 0.29, 0.24, 0.25}, TimingIndex::PttD);
    const auto res = leave_one_out(pairs, Target::Sbp, TimingIndex::PttD);
    CHECK(res.records.size() + res.skipped.size() == 6);
    CHECK(res.records.size() == 6);
    CHECK(res.fits.size() == 6);
    for (const auto& r : res.records) {
        CHECK(std::abs(r.error) < 0.5);
        CHECK(r.error == doctest::Approx(r.estimated_bp - r.target_bp));
    }
    const auto again = leave_one_out(pairs, Target::Sbp, TimingIndex::PttD);
    CHECK(again.records == res.records);
    CHECK_ERROR_CODE(leave_one_out(std::vector<CalibrationPair>(pairs.begin(), pairs.begin() + 3), Target::Sbp,
                                   TimingIndex::PttD),
                     ErrorCode::TooFewPairs);
}

TEST_CASE("folds that cannot be fitted are skipped and reported") {
    auto pairs = pairs_from({38, 0, 450}, {0.20, 0.20, 0.20, 0.30}, TimingIndex::PttF);
    const auto res = leave_one_out(pairs, Target::Sbp, TimingIndex::PttF);
    // Holding out the only distinct t leaves a singular design.
    CHECK(res.skipped.size() == 1);
    CHECK(res.skipped[0].interval_index == 3);
    CHECK(res.records.size() == 3);
}

TEST_CASE("pooled report") {
    const BpModel m{38, 20, 450};
    std::vector<LooResult> subjects;
    for (int s = 0; s < 4; ++s) {
        auto pairs = pairs_from(m, {0.20, 0.27, 0.22, 0.29, 0.24}, TimingIndex::PttF);
        for (auto& p : pairs) p.sbp += s * 0.3 * p.interval_index;
        auto r = leave_one_out(pairs, Target::Sbp, TimingIndex::PttF);
        r.subject_id = "s" + std::to_string(s);
        subjects.push_back(r);
    }
    const auto one = pooled_report({subjects[0]});
    const auto own = compute_metrics(subjects[0].records);
    CHECK(one.metrics.mae == own.mae);
    CHECK(one.metrics.std == own.std);
    CHECK(*one.metrics.r == *own.r);

    const auto all = pooled_report(subjects);
    CHECK(all.metrics.n == 20);
    auto permuted = subjects;
    std::reverse(permuted.begin(), permuted.end());
    const auto again = pooled_report(permuted);
    CHECK(again.metrics.me == all.metrics.me);
    CHECK(again.metrics.std == all.metrics.std);
    CHECK(*again.metrics.r == *all.metrics.r);
    CHECK(again.records == all.records);
    CHECK_ERROR_CODE(pooled_report({}), ErrorCode::TooFewPoints);
}
