#ifndef RELTIME_QA_HPP
#define RELTIME_QA_HPP

#include "reltime/annotation.hpp"

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reltime {

// One unit of crowdsourced work: five annotations by one annotator.
struct Assignment {
    std::string annotator_id;
    double elapsed_seconds = 0.0;
    std::vector<AnnotationRecord> annotations;  // exactly 5
};

enum class QaFlagKind {
    Time,              // finished in under a minute
    ConstantSliders,   // all 20 slider values equal
    ConstantDurations, // all 10 duration responses equal (manual review)
    Inconsistent,      // slider/duration contradiction in > 60% of annotations
};

struct QaFlag {
    QaFlagKind kind;
    std::string detail;
};

const char* to_string(QaFlagKind k);

// Ridit scores for one annotator's rating history: each rating maps to
// (count below + half the count equal) / total, so scores live strictly in
// (0,1) and average to 1/2. Returned in input order.
std::vector<double> ridit_scores(std::span<const int> ratings);

// Run the four rejection checks on one assignment. Throws
// MalformedAssignment unless it holds exactly five annotations.
std::vector<QaFlag> validate_assignment(const Assignment& a);

struct IaaReport {
    double slider_rho = 0.0;
    double mean_duration_rank_diff = 0.0;
};

// Agreement between two annotators over shared items: Spearman over the
// pooled normalized slider values, and the mean absolute duration rank
// difference over all duration responses.
IaaReport iaa_report(
    std::span<const std::pair<AnnotationRecord, AnnotationRecord>> shared);

}  // namespace reltime

#endif  // RELTIME_QA_HPP
