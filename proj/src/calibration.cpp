#include "pttbp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pttbp/errors.hpp"

namespace pttbp {

namespace {

struct Evaluation {
    double loss = 0.0;
    std::array<double, 3> gradient{};
    std::array<double, 3> curvature{};  // Gauss-Newton diagonal
    int clamped = 0;
};

// Loss with the radicand clamped at epsilon, as used inside the descent.
Evaluation evaluate(const std::array<double, 3>& p, std::span<const TimedBp> pairs) {
    Evaluation e;
    const double n = static_cast<double>(pairs.size());
    for (const auto& q : pairs) {
        const double inv_t2 = 1.0 / (q.t * q.t);
        double rad = p[1] + p[2] * inv_t2;
        if (rad < kRadicandEpsilon) {
            rad = kRadicandEpsilon;
            ++e.clamped;
        }
        const double s = std::sqrt(rad);
        const double r = p[0] + s - q.bp;
        const double ds = 0.5 / s;
        e.loss += r * r;
        e.gradient[0] += 2.0 * r;
        e.gradient[1] += r / s;
        e.gradient[2] += r * inv_t2 / s;
        e.curvature[0] += 2.0;
        e.curvature[1] += 2.0 * ds * ds;
        e.curvature[2] += 2.0 * ds * ds * inv_t2 * inv_t2;
    }
    e.loss /= n;
    for (int j = 0; j < 3; ++j) {
        e.gradient[j] /= n;
        e.curvature[j] /= n;
    }
    return e;
}

void check_times(std::span<const TimedBp> pairs) {
    for (const auto& q : pairs)
        if (!(q.t > 0.0) || !std::isfinite(q.t) || !std::isfinite(q.bp))
            fail(ErrorCode::DomainViolation, "timing values must be positive and finite");
}

}  // namespace

double estimate_bp(const BpModel& model, double t) {
    if (!(t > 0.0)) fail(ErrorCode::DomainViolation, "timing index must be positive");
    const double rad = model.a1 + model.a2 / (t * t);
    if (rad < 0.0) fail(ErrorCode::DomainViolation, "negative radicand at t = " + std::to_string(t));
    return model.a0 + std::sqrt(rad);
}

LsInit ls_init(std::span<const TimedBp> pairs) {
    if (pairs.size() < 2) fail(ErrorCode::DegenerateDesign, "least squares needs at least two pairs");
    check_times(pairs);
    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (const auto& q : pairs) {
        mx += 1.0 / q.t;
        my += q.bp;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& q : pairs) {
        const double dx = 1.0 / q.t - mx;
        sxx += dx * dx;
        sxy += dx * (q.bp - my);
    }
    if (!(sxx > 1e-12 * mx * mx * n)) fail(ErrorCode::DegenerateDesign, "all timing values are equal");
    const double slope = sxy / sxx;
    if (slope <= 0.0) return {my, 0.0};
    return {my - slope * mx, slope * slope};
}

LossGradient loss_and_gradient(const BpModel& model, std::span<const TimedBp> pairs) {
    if (pairs.empty()) fail(ErrorCode::TooFewPairs, "loss needs at least one pair");
    check_times(pairs);
    for (const auto& q : pairs)
        if (model.a1 + model.a2 / (q.t * q.t) < kRadicandEpsilon)
            fail(ErrorCode::DomainViolation, "radicand below epsilon at t = " + std::to_string(q.t));
    const auto e = evaluate({model.a0, model.a1, model.a2}, pairs);
    return {e.loss, e.gradient};
}

FitReport fit_model(std::span<const TimedBp> pairs, Target target, TimingIndex index, const GdConfig& config) {
    if (pairs.size() < 3) fail(ErrorCode::TooFewPairs, "fitting three parameters needs at least three pairs");
    if (!(config.learning_rate > 0.0) || config.max_iterations < 1)
        fail(ErrorCode::InvalidArgument, "learning rate must be positive and max_iterations at least 1");

    const auto init = ls_init(pairs);
    std::array<double, 3> p{init.a0, 0.0, init.a2};
    auto cur = evaluate(p, pairs);

    FitReport rep;
    rep.initial_loss = cur.loss;
    rep.clamp_count = cur.clamped;
    if (config.record_history) rep.loss_history.push_back(cur.loss);

    double step = config.learning_rate;
    for (int it = 0; it < config.max_iterations; ++it) {
        if (cur.loss == 0.0) {
            rep.converged = true;
            break;
        }
        std::array<double, 3> dir = cur.gradient;
        if (config.preconditioned)
            for (int j = 0; j < 3; ++j) dir[j] /= std::max(cur.curvature[j], std::numeric_limits<double>::min());

        if (!config.preconditioned) step = config.learning_rate;
        bool accepted = false;
        Evaluation next;
        std::array<double, 3> trial{};
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (int j = 0; j < 3; ++j) trial[j] = p[j] - step * dir[j];
            next = evaluate(trial, pairs);
            rep.clamp_count += next.clamped;
            if (next.loss <= cur.loss) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            rep.converged = true;  // no descent direction left at double precision
            break;
        }
        const double rel = (cur.loss - next.loss) / cur.loss;
        p = trial;
        cur = next;
        rep.iterations_used = it + 1;
        if (config.record_history) rep.loss_history.push_back(cur.loss);
        if (rel < config.tolerance) {
            rep.converged = true;
            break;
        }
        if (config.preconditioned) step = std::min(2.0 * step, 1.0);
    }

    rep.model = {p[0], p[1], p[2], target, index};
    rep.final_loss = cur.loss;

    const bool valid = std::all_of(pairs.begin(), pairs.end(),
                                   [&](const TimedBp& q) { return p[1] + p[2] / (q.t * q.t) >= 0.0; });
    if (!valid) {
        rep.model = {init.a0, 0.0, init.a2, target, index};
        rep.final_loss = rep.initial_loss;
        rep.converged = false;
    }
    rep.a2_sign = (rep.model.a2 > 0.0) - (rep.model.a2 < 0.0);
    return rep;
}

std::vector<TimedBp> select_pairs(const std::vector<CalibrationPair>& pairs, Target target, TimingIndex index) {
    std::vector<TimedBp> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back({p.features.value(index), p.bp(target)});
    return out;
}

}  // namespace pttbp
