#pragma once

#include <array>
#include <span>
#include <vector>

#include "pttbp/features.hpp"
#include "pttbp/model.hpp"

namespace pttbp {

struct GdConfig {
    double learning_rate = 0.01;
    int max_iterations = 10000;
    double tolerance = 1e-10;  // relative loss change that ends the descent
    // Scale each gradient component by the inverse Gauss-Newton curvature of
    // its parameter and let the step regrow after successful iterations.
    // Off gives the textbook fixed-rate update (with backtracking only).
    bool preconditioned = true;
    bool record_history = false;
};

struct TimedBp {
    double t = 0.0;   // s
    double bp = 0.0;  // mmHg
};

struct FitReport {
    BpModel model;
    double initial_loss = 0.0;  // mean squared residual at the LS initializer
    double final_loss = 0.0;
    int iterations_used = 0;
    bool converged = false;
    int clamp_count = 0;        // radicand evaluations clamped at epsilon
    int a2_sign = 0;
    std::vector<double> loss_history;  // only with GdConfig::record_history
};

struct LsInit {
    double a0 = 0.0;
    double a2 = 0.0;
};

struct LossGradient {
    double loss = 0.0;
    std::array<double, 3> gradient{};  // d/da0, d/da1, d/da2
};

inline constexpr double kRadicandEpsilon = 1e-9;

// a0 + sqrt(a1 + a2 / t^2). Throws DomainViolation for t <= 0 or a negative
// radicand.
double estimate_bp(const BpModel& model, double t);

// Ordinary least squares of bp on 1/t; a2 is the squared slope (slope
// clamped at zero). Throws DegenerateDesign.
LsInit ls_init(std::span<const TimedBp> pairs);

// Mean squared error and its analytic gradient. Throws DomainViolation if a
// radicand falls below kRadicandEpsilon.
LossGradient loss_and_gradient(const BpModel& model, std::span<const TimedBp> pairs);

// LS initialization followed by gradient descent with backtracking.
// Throws TooFewPairs, DegenerateDesign.
FitReport fit_model(std::span<const TimedBp> pairs, Target target, TimingIndex index, const GdConfig& config = {});

std::vector<TimedBp> select_pairs(const std::vector<CalibrationPair>& pairs, Target target, TimingIndex index);

}  // namespace pttbp
