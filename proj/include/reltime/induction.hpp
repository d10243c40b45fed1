#ifndef RELTIME_INDUCTION_HPP
#define RELTIME_INDUCTION_HPP

#include "reltime/duration.hpp"
#include "reltime/timeline.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace reltime {

// Latent per-document timeline: one (begin, duration) row per predicate in
// abstract time units. Anchored timelines have min begin = 0 and all
// durations > 0.
struct TimelineEntry {
    double begin = 0.0;
    double duration = 1.0;
    bool operator==(const TimelineEntry&) const = default;
};

struct DocumentTimeline {
    std::vector<TimelineEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool operator==(const DocumentTimeline&) const = default;
};

bool is_valid(const DocumentTimeline& t, double eps = 1e-9);

// One pairwise constraint on the latent timeline.
struct PairObservation {
    std::size_t i = 0;
    std::size_t j = 0;
    RelativeTimeline target;
    double weight = 1.0;
    // Optional categorical durations for events i and j, used when the
    // duration penalty is active.
    std::optional<std::pair<DurationClass, DurationClass>> gold_durations;
};

struct InductionConfig {
    int max_iters = 5000;
    double step_size = 0.1;
    double tolerance = 1e-10;
    double duration_weight = 0.0;  // lambda on the duration NLL penalty
    std::uint64_t seed = 0;
};

struct InductionDiagnostics {
    double final_loss = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> pair_residuals;  // relation loss per observation
    double duration_coeff = 1.0;         // learned link coefficient
    std::vector<double> objective_trace; // value after each accepted step
};

struct InductionResult {
    DocumentTimeline timeline;
    InductionDiagnostics diagnostics;
};

// Project the latent rows i and j down to a normalized pairwise timeline:
// build [t_i1, t_i1+t_i2, t_j1, t_j1+t_j2] and normalize it.
RelativeTimeline project_pair(const DocumentTimeline& t, std::size_t i, std::size_t j);

// Fit a document timeline to the observations by minimizing
//   sum_obs weight * relation_loss(target, project_pair(T, i, j))
//   + lambda * sum duration_nll(binomial(sigma(c * log t_k2)), gold)
// by gradient descent on softplus-reparameterized begins/durations and the
// link coefficient c, with step-halving line search. The duration sum runs
// over every observation entry that carries a gold class. The returned
// timeline is re-anchored so min begin = 0. Throws NotConnected when the
// observation graph does not join all predicates.
InductionResult induce(std::span<const PairObservation> observations,
                       std::size_t n_predicates,
                       const InductionConfig& cfg = {});

// Unconstrained coordinates of the induction objective: begins and
// durations through softplus, plus the duration-link coefficient.
struct InductionPoint {
    std::vector<double> u_begin;
    std::vector<double> u_duration;
    double coeff = 1.0;
};

double induction_objective(std::span<const PairObservation> observations,
                           const InductionPoint& point, double duration_weight);

InductionPoint induction_gradient(std::span<const PairObservation> observations,
                                  const InductionPoint& point, double duration_weight);

// Max absolute deviation between the analytic gradient and central finite
// differences over all coordinates. Throws KinkNearby when the point sits
// within `margin` of an L1 kink, a min/max selection tie, or a saturated
// duration probability.
double gradient_check(std::span<const PairObservation> observations,
                      const InductionPoint& point, double duration_weight,
                      double step = 1e-6, double margin = 1e-4);

struct TimelineAgreement {
    double begin_rho = 0.0;
    double duration_rho = 0.0;
};

// Spearman correlation of the two timelines' begins and durations.
TimelineAgreement compare_timelines(const DocumentTimeline& a, const DocumentTimeline& b);

double softplus(double x);
double softplus_inverse(double y);

}  // namespace reltime

#endif  // RELTIME_INDUCTION_HPP
