#ifndef RELTIME_METRICS_HPP
#define RELTIME_METRICS_HPP

#include "reltime/duration.hpp"
#include "reltime/timeline.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reltime {

// One scored prediction pair. Missing duration parts contribute nothing to
// the total loss; missing weights default to 1.
struct PairLossInput {
    RelativeTimeline gold;
    RelativeTimeline pred;
    std::optional<std::pair<DurationClass, DurationClass>> gold_durations;
    std::optional<std::pair<DurationDistribution, DurationDistribution>> pred_duration_dists;
    std::optional<double> weight_rel;
    std::optional<double> weight_dur1;
    std::optional<double> weight_dur2;
};

struct MetricReport {
    std::optional<double> spearman_rho;
    std::optional<double> mean_rank_diff;
    std::optional<double> r1;
    std::optional<double> absolute_rho;
    std::optional<double> relative_rho;
};

// JSON object with fixed key names: rho, rank_diff, r1, absolute_rho,
// relative_rho. Absent metrics are omitted.
std::string to_json_string(const MetricReport& report);

// The four within-pair difference terms the relation loss compares:
// b1-b2, e1-b2, e2-b1, e1-e2.
std::array<double, 4> relation_terms(const RelativeTimeline& t);

// Sum of the four L1 differences between gold and predicted terms.
// Symmetric, and invariant to a common shift of either argument's values.
double relation_loss(const RelativeTimeline& gold, const RelativeTimeline& pred);

// Combined objective: sum over items of
//   w_dur1 * nll1 + w_dur2 * nll2 + 2 * w_rel * relation_loss.
double total_loss(std::span<const PairLossInput> items);

// Rank correlation with average ranks for ties. Exact 1 / -1 for perfectly
// aligned / reversed rank vectors. Throws DegenerateInput for constant
// input or length < 2.
double spearman(std::span<const double> x, std::span<const double> y);

// Duration metrics: Spearman of ranks, mean absolute rank difference, and
// R1 = 1 - MAE / MAE of the constant gold-median baseline.
MetricReport eval_durations(std::span<const DurationClass> gold,
                            std::span<const DurationClass> pred);

// Relation metrics over aligned timeline lists: absolute rho pools the four
// normalized endpoints per pair; relative rho averages the Spearman of each
// of the four difference-term kinds across pairs; R1 compares term-space
// MAE against a baseline predicting the per-term gold median.
MetricReport eval_relations(std::span<const RelativeTimeline> gold,
                            std::span<const RelativeTimeline> pred);

}  // namespace reltime

#endif  // RELTIME_METRICS_HPP
