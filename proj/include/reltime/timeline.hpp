#ifndef RELTIME_TIMELINE_HPP
#define RELTIME_TIMELINE_HPP

#include <array>
#include <string>

namespace reltime {

// Raw slider positions for a pair of events, on whatever affine scale the
// annotation UI used (typically 0-100). Order: beg(e1), end(e1), beg(e2), end(e2).
struct SliderQuadruple {
    double b1 = 0.0;
    double e1 = 0.0;
    double b2 = 0.0;
    double e2 = 0.0;

    std::array<double, 4> values() const { return {b1, e1, b2, e2}; }
    bool operator==(const SliderQuadruple&) const = default;
};

// A normalized pairwise timeline: the earliest point sits at 0, the latest
// at 1, and within each event end >= begin.
struct RelativeTimeline {
    double b1 = 0.0;
    double e1 = 0.0;
    double b2 = 0.0;
    double e2 = 0.0;

    std::array<double, 4> values() const { return {b1, e1, b2, e2}; }
    double span1() const { return e1 - b1; }
    double span2() const { return e2 - b2; }
    bool operator==(const RelativeTimeline&) const = default;
};

// The rotated, interpretable coordinates of a relative timeline.
//   priority    > 0 when e1 starts and/or ends earlier than e2
//   containment > 0 when e1's extent exceeds e2's
//   equality    large when both extents are large and equal
//   shift       moves both events forward or backward together
// Each lies in [-1, 1] when derived from a valid relative timeline.
struct RelationCoordinates {
    double priority = 0.0;
    double containment = 0.0;
    double equality = 0.0;
    double shift = 0.0;

    std::array<double, 4> values() const { return {priority, containment, equality, shift}; }
    bool operator==(const RelationCoordinates&) const = default;
};

// Unconstrained head outputs: per-event begin logit and duration offset.
struct RelationHeadParams {
    double beta1 = 0.0;
    double delta1 = 0.0;
    double beta2 = 0.0;
    double delta2 = 0.0;
};

// The 13 qualitative interval relations.
enum class AllenRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equal,
};

// Coarse label for transfer to categorical schemes.
enum class CoarseRelation {
    Before,
    After,
    Includes,
    IsIncluded,
    Simultaneous,
    Vague,
};

struct IntervalRelation {
    AllenRelation allen;
    CoarseRelation coarse;
    bool operator==(const IntervalRelation&) const = default;
};

const char* to_string(AllenRelation r);
const char* to_string(CoarseRelation r);

// True when the quadruple is finite with end >= begin per event.
bool is_valid(const SliderQuadruple& s);

// True when additionally min(b1,b2) = 0 and max(e1,e2) = 1 (up to eps).
bool is_valid(const RelativeTimeline& t, double eps = 1e-9);

// Min-shift then max-divide. Affine-invariant: any positive rescaling or
// shift of the raw values yields the same result. Throws DegenerateSliders
// when all four values coincide, DomainError on invalid input.
RelativeTimeline normalize_sliders(const SliderQuadruple& raw);

// Rotate a (normalized) timeline into relation coordinates. Linear and
// total; the [-1,1] coordinate bounds hold only for valid inputs.
RelationCoordinates rotate(const RelativeTimeline& t);

// Inverse of rotate. The result may violate normalization (or even event
// ordering) for arbitrary coordinates; callers renormalize when needed.
SliderQuadruple unrotate(const RelationCoordinates& r);

// Map head outputs through the logistic function, b = sigma(beta),
// e = sigma(beta + |delta|), then normalize. End >= begin always holds.
// Throws DegenerateSliders when all four sigmoid values coincide.
RelativeTimeline head_params_to_timeline(const RelationHeadParams& p);

// Classify [b1,e1] vs [b2,e2] with equality tested at tolerance epsilon.
IntervalRelation interval_relation(const RelativeTimeline& t, double epsilon = 1e-6);

// Fixed Allen -> coarse table: before/meets -> BEFORE (mirrored -> AFTER);
// contains/started-by/finished-by -> INCLUDES (mirrored -> IS_INCLUDED);
// equal -> SIMULTANEOUS; overlap cases -> VAGUE.
CoarseRelation coarse_relation(AllenRelation r);

// Logistic function 1 / (1 + exp(-x)).
double logistic(double x);

}  // namespace reltime

#endif  // RELTIME_TIMELINE_HPP
