#include "reltime/timeline.hpp"

#include "reltime/errors.hpp"

#include <algorithm>
#include <cmath>

namespace reltime {

namespace {

// Rows: priority, containment, equality, shift.
// Columns follow the slider order b1, e1, b2, e2.
// Orthogonal up to scale: M * M^T = 4I, so M^-1 = M^T / 4.
constexpr double kRotation[4][4] = {
    {-1.0, -1.0, 1.0, 1.0},
    {-1.0, 1.0, 1.0, -1.0},
    {-1.0, 1.0, -1.0, 1.0},
    {1.0, 1.0, 1.0, 1.0},
};

}  // namespace

const char* to_string(AllenRelation r) {
    switch (r) {
        case AllenRelation::Before: return "before";
        case AllenRelation::After: return "after";
        case AllenRelation::Meets: return "meets";
        case AllenRelation::MetBy: return "met-by";
        case AllenRelation::Overlaps: return "overlaps";
        case AllenRelation::OverlappedBy: return "overlapped-by";
        case AllenRelation::Starts: return "starts";
        case AllenRelation::StartedBy: return "started-by";
        case AllenRelation::During: return "during";
        case AllenRelation::Contains: return "contains";
        case AllenRelation::Finishes: return "finishes";
        case AllenRelation::FinishedBy: return "finished-by";
        case AllenRelation::Equal: return "equal";
    }
    return "?";
}

const char* to_string(CoarseRelation r) {
    switch (r) {
        case CoarseRelation::Before: return "BEFORE";
        case CoarseRelation::After: return "AFTER";
        case CoarseRelation::Includes: return "INCLUDES";
        case CoarseRelation::IsIncluded: return "IS_INCLUDED";
        case CoarseRelation::Simultaneous: return "SIMULTANEOUS";
        case CoarseRelation::Vague: return "VAGUE";
    }
    return "?";
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool is_valid(const SliderQuadruple& s) {
    for (double v : s.values()) {
        if (!std::isfinite(v)) return false;
    }
    return s.e1 >= s.b1 && s.e2 >= s.b2;
}

bool is_valid(const RelativeTimeline& t, double eps) {
    for (double v : t.values()) {
        if (!std::isfinite(v) || v < -eps || v > 1.0 + eps) return false;
    }
    return t.e1 >= t.b1 && t.e2 >= t.b2 &&
           std::min(t.b1, t.b2) <= eps &&
           std::max(t.e1, t.e2) >= 1.0 - eps;
}

RelativeTimeline normalize_sliders(const SliderQuadruple& raw) {
    if (!is_valid(raw)) {
        throw DomainError("normalize_sliders: sliders must be finite with end >= begin");
    }
    const auto v = raw.values();
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const double range = hi - lo;
    if (range == 0.0) {
        throw DegenerateSliders();
    }
    return {(raw.b1 - lo) / range, (raw.e1 - lo) / range,
            (raw.b2 - lo) / range, (raw.e2 - lo) / range};
}

RelationCoordinates rotate(const RelativeTimeline& t) {
    const auto s = t.values();
    std::array<double, 4> v{};
    for (int j = 0; j < 4; ++j) v[j] = 2.0 * s[j] - 1.0;
    std::array<double, 4> r{};
    // r = v * M^T / 4, i.e. r_k = <v, row k of M> / 4.
    for (int k = 0; k < 4; ++k) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) acc += v[j] * kRotation[k][j];
        r[k] = acc / 4.0;
    }
    return {r[0], r[1], r[2], r[3]};
}

SliderQuadruple unrotate(const RelationCoordinates& r) {
    const auto c = r.values();
    std::array<double, 4> s{};
    // s_j = (<c, column j of M> + 1) / 2.
    for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += c[k] * kRotation[k][j];
        s[j] = (acc + 1.0) / 2.0;
    }
    return {s[0], s[1], s[2], s[3]};
}

RelativeTimeline head_params_to_timeline(const RelationHeadParams& p) {
    const double b1 = logistic(p.beta1);
    const double e1 = logistic(p.beta1 + std::abs(p.delta1));
    const double b2 = logistic(p.beta2);
    const double e2 = logistic(p.beta2 + std::abs(p.delta2));
    return normalize_sliders({b1, e1, b2, e2});
}

CoarseRelation coarse_relation(AllenRelation r) {
    switch (r) {
        case AllenRelation::Before:
        case AllenRelation::Meets:
            return CoarseRelation::Before;
        case AllenRelation::After:
        case AllenRelation::MetBy:
            return CoarseRelation::After;
        case AllenRelation::Contains:
        case AllenRelation::StartedBy:
        case AllenRelation::FinishedBy:
            return CoarseRelation::Includes;
        case AllenRelation::During:
        case AllenRelation::Starts:
        case AllenRelation::Finishes:
            return CoarseRelation::IsIncluded;
        case AllenRelation::Equal:
            return CoarseRelation::Simultaneous;
        case AllenRelation::Overlaps:
        case AllenRelation::OverlappedBy:
            return CoarseRelation::Vague;
    }
    return CoarseRelation::Vague;
}

IntervalRelation interval_relation(const RelativeTimeline& t, double epsilon) {
    if (epsilon < 0.0) {
        throw DomainError("interval_relation: epsilon must be >= 0");
    }
    const auto cmp = [epsilon](double x, double y) -> int {
        if (std::abs(x - y) <= epsilon) return 0;
        return x < y ? -1 : 1;
    };
    const int cb = cmp(t.b1, t.b2);
    const int ce = cmp(t.e1, t.e2);
    const int e1_vs_b2 = cmp(t.e1, t.b2);
    const int e2_vs_b1 = cmp(t.e2, t.b1);

    AllenRelation allen;
    if (cb == 0 && ce == 0) {
        allen = AllenRelation::Equal;
    } else if (e1_vs_b2 < 0) {
        allen = AllenRelation::Before;
    } else if (e1_vs_b2 == 0) {
        allen = AllenRelation::Meets;
    } else if (e2_vs_b1 < 0) {
        allen = AllenRelation::After;
    } else if (e2_vs_b1 == 0) {
        allen = AllenRelation::MetBy;
    } else if (cb == 0) {
        allen = ce < 0 ? AllenRelation::Starts : AllenRelation::StartedBy;
    } else if (ce == 0) {
        allen = cb > 0 ? AllenRelation::Finishes : AllenRelation::FinishedBy;
    } else if (cb < 0 && ce > 0) {
        allen = AllenRelation::Contains;
    } else if (cb > 0 && ce < 0) {
        allen = AllenRelation::During;
    } else if (cb < 0) {
        allen = AllenRelation::Overlaps;
    } else {
        allen = AllenRelation::OverlappedBy;
    }
    return {allen, coarse_relation(allen)};
}

}  // namespace reltime
