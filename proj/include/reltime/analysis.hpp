#ifndef RELTIME_ANALYSIS_HPP
#define RELTIME_ANALYSIS_HPP

#include "reltime/timeline.hpp"

#include <span>
#include <vector>

namespace reltime {

// Two aligned data views, one row per sample.
struct TwoViewSample {
    std::vector<std::vector<double>> x;  // N x p
    std::vector<std::vector<double>> y;  // N x q
};

// Canonical correlations between the two views, sorted descending, length
// min(p, q), each in [0, 1]. Covariances get a ridge of 1e-8 before
// whitening; throws SingularCovariance when whitening still fails or a
// column is constant.
std::vector<double> cca(const TwoViewSample& sample);

// One sentence's attention distribution plus its binary token features.
struct AttributionProblem {
    std::vector<double> alpha;                    // simplex over tokens
    std::vector<std::vector<double>> features;    // tokens x K, entries 0/1
};

struct AttributionConfig {
    int max_iters = 20000;
    double step_size = 1.0;
    double tolerance = 1e-14;   // relative objective change
    double gradient_tolerance = 1e-9;
    double l2_penalty = 1e-6;   // pins collinear coefficient directions
};

struct AttributionResult {
    std::vector<double> coefficients;
    double mean_kl = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_gradient_norm = 0.0;
    std::vector<double> objective_trace;  // value after each accepted step
};

// Fit coefficients c minimizing sum_s KL(alpha_s || softmax(F_s c)) plus a
// small L2 penalty, by gradient descent with step-halving line search (the
// trace is nonincreasing by construction). No intercept term is used.
AttributionResult kl_attribution(std::span<const AttributionProblem> problems,
                                 const AttributionConfig& cfg = {});

struct CoordinateAgreement {
    double priority = 0.0;
    double containment = 0.0;
    double equality = 0.0;
    double shift = 0.0;
};

// Per-dimension Spearman between gold and predicted relation coordinates.
CoordinateAgreement coordinate_agreement(std::span<const RelationCoordinates> gold,
                                         std::span<const RelationCoordinates> pred);

}  // namespace reltime

#endif  // RELTIME_ANALYSIS_HPP
