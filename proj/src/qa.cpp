#include "reltime/qa.hpp"

#include "reltime/errors.hpp"
#include "reltime/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace reltime {

namespace {

constexpr std::size_t kAnnotationsPerAssignment = 5;
constexpr double kMinPlausibleSeconds = 60.0;
constexpr double kInconsistencyShare = 0.6;  // strict: must be exceeded

}  // namespace

const char* to_string(QaFlagKind k) {
    switch (k) {
        case QaFlagKind::Time: return "TIME";
        case QaFlagKind::ConstantSliders: return "CONSTANT_SLIDERS";
        case QaFlagKind::ConstantDurations: return "CONSTANT_DURATIONS";
        case QaFlagKind::Inconsistent: return "INCONSISTENT";
    }
    return "?";
}

std::vector<double> ridit_scores(std::span<const int> ratings) {
    if (ratings.empty()) {
        throw DomainError("ridit_scores: rating history must be nonempty");
    }
    for (int r : ratings) {
        if (r < 0 || r > 4) {
            throw DomainError("ridit_scores: ratings must be in 0..4");
        }
    }
    std::array<std::size_t, 5> counts{};
    for (int r : ratings) counts[static_cast<std::size_t>(r)]++;
    std::array<double, 5> score{};
    std::size_t below = 0;
    for (std::size_t r = 0; r < 5; ++r) {
        score[r] = (static_cast<double>(below) + 0.5 * static_cast<double>(counts[r])) /
                   static_cast<double>(ratings.size());
        below += counts[r];
    }
    std::vector<double> out;
    out.reserve(ratings.size());
    for (int r : ratings) out.push_back(score[static_cast<std::size_t>(r)]);
    return out;
}

std::vector<QaFlag> validate_assignment(const Assignment& a) {
    if (a.annotations.size() != kAnnotationsPerAssignment) {
        throw MalformedAssignment("assignment must hold exactly 5 annotations, got " +
                                  std::to_string(a.annotations.size()));
    }
    std::vector<QaFlag> flags;

    if (a.elapsed_seconds < kMinPlausibleSeconds) {
        flags.push_back({QaFlagKind::Time,
                         "completed in " + std::to_string(a.elapsed_seconds) + "s"});
    }

    bool sliders_constant = true;
    const double first_slider = a.annotations.front().sliders.b1;
    for (const auto& ann : a.annotations) {
        for (double v : ann.sliders.values()) {
            sliders_constant = sliders_constant && v == first_slider;
        }
    }
    if (sliders_constant) {
        flags.push_back({QaFlagKind::ConstantSliders, "all 20 slider values equal"});
    }

    bool durations_constant = true;
    const DurationClass first_dur = a.annotations.front().dur1;
    for (const auto& ann : a.annotations) {
        durations_constant = durations_constant && ann.dur1 == first_dur && ann.dur2 == first_dur;
    }
    if (durations_constant) {
        flags.push_back({QaFlagKind::ConstantDurations, "all 10 duration responses equal"});
    }

    std::size_t inconsistent = 0;
    for (const auto& ann : a.annotations) {
        if (!check_consistency(ann.sliders, ann.dur1, ann.dur2)) ++inconsistent;
    }
    const double share = static_cast<double>(inconsistent) /
                         static_cast<double>(kAnnotationsPerAssignment);
    if (share > kInconsistencyShare) {
        flags.push_back({QaFlagKind::Inconsistent,
                         std::to_string(inconsistent) + " of 5 annotations inconsistent"});
    }
    return flags;
}

IaaReport iaa_report(
    std::span<const std::pair<AnnotationRecord, AnnotationRecord>> shared) {
    if (shared.size() < 2) {
        throw DegenerateInput("iaa_report: need at least 2 shared items");
    }
    std::vector<double> a_sliders, b_sliders;
    a_sliders.reserve(4 * shared.size());
    b_sliders.reserve(4 * shared.size());
    double rank_diff = 0.0;
    for (const auto& [a, b] : shared) {
        for (double v : normalize_sliders(a.sliders).values()) a_sliders.push_back(v);
        for (double v : normalize_sliders(b.sliders).values()) b_sliders.push_back(v);
        rank_diff += std::abs(rank(a.dur1) - rank(b.dur1));
        rank_diff += std::abs(rank(a.dur2) - rank(b.dur2));
    }
    IaaReport report;
    report.slider_rho = spearman(a_sliders, b_sliders);
    report.mean_duration_rank_diff = rank_diff / (2.0 * static_cast<double>(shared.size()));
    return report;
}

}  // namespace reltime
